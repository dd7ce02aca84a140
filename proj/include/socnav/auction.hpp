#pragma once

#include "socnav/nav_graph.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace socnav {

class AuctionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Bid {
  int robot;
  double value;  // finite, >= 0
};

/// Turn permutation over the conflicting robots. by_turn[0] holds the robot
/// that moves first.
struct PriorityOrdering {
  std::vector<int> by_turn;

  int size() const { return static_cast<int>(by_turn.size()); }
  int robot_at(int turn) const;      // turn in [1, k]
  int turn_of(int robot) const;      // inverse lookup
  bool contains(int robot) const;
  void remove(int robot);            // later turns shift down by one
};

struct Conflict {
  std::vector<int> robots;  // >= 2, distinct
  std::string zone_id;
  long tick = 0;
};

/// Reward schedule: strictly decreasing distinct positive values. Throws if
/// the invariant fails.
void validate_alpha(const std::vector<double>& alpha);

/// Default schedule alpha_q = k - q + 1.
std::vector<double> default_alpha(int k);

struct ConflictQuery {
  int robot;
  Vec2 position;
  const GlobalPath* path;
};

/// Every robot whose remaining path crosses the zone and which is within the
/// engagement radius joins the conflict; fewer than two such robots means no
/// conflict.
std::optional<Conflict> detect_conflict(const std::vector<ConflictQuery>& robots,
                                        const ConflictZone& zone, long tick,
                                        double engagement_radius);

/// Highest bid moves first; ties broken by lowest robot id.
PriorityOrdering allocate(const std::vector<Bid>& bids);

/// Social-cost payment for the robot on turn q:
///   sum_{j=q}^{k} bhat_{j+1} * (alpha_j - alpha_{j+1})
/// where bhat_{j+1} is the bid of the robot on turn j+1. Terms past the last
/// turn use alpha_{k+1} = 0 and bid 0, so the last robot pays nothing.
/// bids_below holds the bids for turns q+1, q+2, ... (may be shorter than k-q).
double payment(int q, const std::vector<double>& bids_below,
               const std::vector<double>& alpha);

/// Truthful bid: the dominant strategy is to report zeta directly.
Bid optimal_bid(int robot, double zeta);

double welfare(const PriorityOrdering& sigma, const std::vector<double>& zeta,
               const std::vector<double>& alpha);

using AllocateFn = PriorityOrdering (*)(const std::vector<Bid>&);

/// Exhaustively checks that truthful bidding dominates every unilateral
/// deviation onto the grid, for every zeta profile drawn from the grid.
/// Payments charge the actual bids of lower-turn robots. An alternative
/// allocation rule can be passed in to confirm the check rejects it.
bool verify_dsic(int k, const std::vector<double>& grid,
                 const std::vector<double>& alpha,
                 AllocateFn alloc = &allocate);

}  // namespace socnav
