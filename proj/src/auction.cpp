#include "socnav/auction.hpp"

#include <algorithm>
#include <cmath>

namespace socnav {

int PriorityOrdering::robot_at(int turn) const {
  if (turn < 1 || turn > size()) throw AuctionError("turn out of range");
  return by_turn[turn - 1];
}

int PriorityOrdering::turn_of(int robot) const {
  for (int i = 0; i < size(); ++i) {
    if (by_turn[i] == robot) return i + 1;
  }
  throw AuctionError("robot not in ordering");
}

bool PriorityOrdering::contains(int robot) const {
  return std::find(by_turn.begin(), by_turn.end(), robot) != by_turn.end();
}

void PriorityOrdering::remove(int robot) {
  by_turn.erase(std::remove(by_turn.begin(), by_turn.end(), robot),
                by_turn.end());
}

void validate_alpha(const std::vector<double>& alpha) {
  if (alpha.empty()) throw AuctionError("empty reward schedule");
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] <= 0.0) throw AuctionError("reward values must be positive");
    if (i + 1 < alpha.size() && alpha[i] <= alpha[i + 1]) {
      throw AuctionError("reward schedule must be strictly decreasing");
    }
  }
}

std::vector<double> default_alpha(int k) {
  std::vector<double> alpha(k);
  for (int q = 1; q <= k; ++q) alpha[q - 1] = static_cast<double>(k - q + 1);
  return alpha;
}

std::optional<Conflict> detect_conflict(const std::vector<ConflictQuery>& robots,
                                        const ConflictZone& zone, long tick,
                                        double engagement_radius) {
  Conflict c;
  c.zone_id = zone.id;
  c.tick = tick;
  for (const auto& q : robots) {
    if (q.path == nullptr || q.path->empty()) continue;
    if (distance_to_zone(q.position, zone) >= engagement_radius) continue;
    if (!path_crosses_zone(*q.path, q.position, zone)) continue;
    c.robots.push_back(q.robot);
  }
  if (c.robots.size() < 2) return std::nullopt;
  return c;
}

PriorityOrdering allocate(const std::vector<Bid>& bids) {
  if (bids.empty()) throw AuctionError("empty auction");
  for (const auto& b : bids) {
    if (!std::isfinite(b.value) || b.value < 0.0) {
      throw AuctionError("bid must be finite and nonnegative");
    }
  }
  std::vector<Bid> sorted = bids;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Bid& a, const Bid& b) {
                     if (a.value != b.value) return a.value > b.value;
                     return a.robot < b.robot;
                   });
  PriorityOrdering sigma;
  sigma.by_turn.reserve(sorted.size());
  for (const auto& b : sorted) sigma.by_turn.push_back(b.robot);
  return sigma;
}

double payment(int q, const std::vector<double>& bids_below,
               const std::vector<double>& alpha) {
  validate_alpha(alpha);
  const int k = static_cast<int>(alpha.size());
  if (q < 1 || q > k) throw AuctionError("turn out of range");
  double p = 0.0;
  for (int j = q; j <= k; ++j) {
    const double a_j = alpha[j - 1];
    const double a_next = (j < k) ? alpha[j] : 0.0;
    const int below = j - q;  // index into bids for turn j+1
    const double b = (below < static_cast<int>(bids_below.size()))
                         ? bids_below[below]
                         : 0.0;
    p += b * (a_j - a_next);
  }
  return p;
}

Bid optimal_bid(int robot, double zeta) {
  if (zeta <= 0.0) throw AuctionError("zeta must be positive");
  return {robot, zeta};
}

double welfare(const PriorityOrdering& sigma, const std::vector<double>& zeta,
               const std::vector<double>& alpha) {
  if (sigma.size() != static_cast<int>(zeta.size()) ||
      sigma.size() != static_cast<int>(alpha.size())) {
    throw AuctionError("size mismatch");
  }
  double w = 0.0;
  for (int turn = 1; turn <= sigma.size(); ++turn) {
    w += zeta[sigma.robot_at(turn)] * alpha[turn - 1];
  }
  return w;
}

namespace {

// Quasi-linear utility of robot i under the given bid profile: the reward of
// the allocated turn minus the social-cost payment charged against the actual
// bids of the robots on later turns.
double utility(int i, std::vector<Bid> bids, double zeta_i,
               const std::vector<double>& alpha, AllocateFn alloc) {
  const PriorityOrdering sigma = alloc(bids);
  const int q = sigma.turn_of(i);
  std::vector<double> below;
  for (int turn = q + 1; turn <= sigma.size(); ++turn) {
    const int r = sigma.robot_at(turn);
    for (const auto& b : bids) {
      if (b.robot == r) below.push_back(b.value);
    }
  }
  return zeta_i * alpha[q - 1] - payment(q, below, alpha);
}

}  // namespace

bool verify_dsic(int k, const std::vector<double>& grid,
                 const std::vector<double>& alpha, AllocateFn alloc) {
  if (k < 2 || k > 4) throw AuctionError("verify_dsic supports 2 <= k <= 4");
  validate_alpha(alpha);
  if (static_cast<int>(alpha.size()) != k) throw AuctionError("size mismatch");

  const int g = static_cast<int>(grid.size());
  std::vector<int> idx(k, 0);
  while (true) {
    std::vector<Bid> truthful(k);
    for (int i = 0; i < k; ++i) truthful[i] = {i, grid[idx[i]]};

    for (int i = 0; i < k; ++i) {
      const double zeta_i = grid[idx[i]];
      const double u_truth = utility(i, truthful, zeta_i, alpha, alloc);
      for (int d = 0; d < g; ++d) {
        if (grid[d] == zeta_i) continue;
        std::vector<Bid> deviated = truthful;
        deviated[i].value = grid[d];
        if (utility(i, deviated, zeta_i, alpha, alloc) > u_truth + 1e-9) {
          return false;
        }
      }
    }

    // next zeta profile
    int pos = 0;
    while (pos < k && ++idx[pos] == g) idx[pos++] = 0;
    if (pos == k) break;
  }
  return true;
}

}  // namespace socnav
