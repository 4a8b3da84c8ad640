#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <queue>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

#include "exie/error.hpp"
#include "exie/heuristic.hpp"
#include "exie/image.hpp"
#include "exie/operators.hpp"
#include "exie/sequence.hpp"

namespace exie {

/// Order among frontier entries with equal f.  Lifo prefers the most
/// recently inserted (depth-first flavored, the default); Fifo the oldest.
enum class TieBreak : std::uint8_t { Lifo, Fifo };

/// Frontier duplicate handling.  None enqueues every child.  QuantizedHash
/// hashes each child's 8-bit-quantized samples and skips enqueueing a child
/// whose hash was already seen; the child still counts as generated and
/// still competes for the best-so-far fallback.
enum class DedupMode : std::uint8_t { None, QuantizedHash };

/// Why the search stopped.
enum class Termination : std::uint8_t { Threshold, Budget };

/// Search parameters.
struct SearchConfig {
  /// Stop as soon as a node with distance-to-target strictly below tau is
  /// popped.  0 disables the threshold entirely.
  double tau = 2.0;
  /// Stop after this many expansions and fall back to the closest node seen.
  std::size_t max_expansions = 7000;
  /// Children generated per expansion, in this order.
  std::vector<Operator> operators = enumerate_all();
  TieBreak tie_break = TieBreak::Lifo;
  DedupMode dedup = DedupMode::None;
  HeuristicConfig heuristic{};

  void validate() const {
    if (!(tau >= 0.0)) throw ConfigError("tau must be non-negative");
    if (max_expansions < 1)
      throw ConfigError("max_expansions must be at least 1");
    if (operators.empty()) throw ConfigError("operator set must be non-empty");
    for (const Operator& op : operators)
      if (!valid_operator(op))
        throw ConfigError("operator parameter outside its family menu: " +
                          op_name(op));
    heuristic.validate();
  }
};

/// Search outcome.
struct SearchReport {
  /// Recovered operator program, shortest path to the reported node.
  EditSequence sequence;
  /// The program applied to the input; replaying the sequence through
  /// apply_sequence reproduces it bit for bit.
  Image result;
  double input_distance = 0.0;
  double result_distance = 0.0;
  /// Nodes popped from the frontier (the goal-test pop included).
  std::size_t expanded = 0;
  /// Child nodes created across all expansions.
  std::size_t generated = 0;
  Termination terminated_by = Termination::Budget;
  double wall_time_seconds = 0.0;
};

/// Min-f frontier with insertion-order tie breaking.
class OpenSet {
public:
  explicit OpenSet(TieBreak tb = TieBreak::Lifo) : heap_(Cmp{tb}) {}

  struct Best {
    double f;
    std::uint32_t node;
  };

  void push(double f, std::uint32_t node) {
    heap_.push(Item{f, next_seq_++, node});
  }

  /// Remove and return the entry with the smallest f, ties resolved by the
  /// configured insertion-order rule.  Throws Error when empty.
  Best pop_best() {
    if (heap_.empty()) throw Error("pop_best on an empty open set");
    const Item it = heap_.top();
    heap_.pop();
    return {it.f, it.node};
  }

  std::size_t size() const noexcept { return heap_.size(); }
  bool empty() const noexcept { return heap_.empty(); }

private:
  struct Item {
    double f;
    std::uint32_t seq;
    std::uint32_t node;
  };
  struct Cmp {
    TieBreak tb;
    // Standard max-heap comparator: true when a ranks below b.
    bool operator()(const Item& a, const Item& b) const noexcept {
      if (a.f != b.f) return a.f > b.f;
      return tb == TieBreak::Lifo ? a.seq < b.seq : a.seq > b.seq;
    }
  };
  std::uint32_t next_seq_ = 0;
  std::priority_queue<Item, std::vector<Item>, Cmp> heap_;
};

/// Replay a path of operator-table indices from a root image.  Throws
/// ConfigError on an index outside the table.
inline Image materialize(std::span<const std::size_t> path,
                         std::span<const Operator> ops, const Image& root) {
  Image img = root;
  for (std::size_t id : path) {
    if (id >= ops.size())
      throw ConfigError("invalid operator id " + std::to_string(id));
    img = apply(ops[id], img);
  }
  return img;
}

namespace detail {

class SearchRun {
public:
  SearchRun(const Image& input, const Image& target, const SearchConfig& cfg)
      : x_(input),
        t_(target),
        cfg_(cfg),
        ev_(target, cfg.heuristic),
        open_(cfg.tie_break),
        scratch_(input.height(), input.width()) {
    cache_.fill({kNoNode, Image{}});
  }

  SearchReport run() {
    const auto t0 = std::chrono::steady_clock::now();

    nodes_.push_back(Node{distance(x_, t_), -1, 0, 0});
    open_.push(0.0 + ev_.whole_image(x_), 0);
    best_node_ = 0;
    best_dist_ = nodes_[0].dist;
    if (cfg_.dedup == DedupMode::QuantizedHash) seen_.insert(image_hash(x_));

    std::uint32_t goal = kNoNode;
    while (expanded_ < cfg_.max_expansions && !open_.empty()) {
      const OpenSet::Best e = open_.pop_best();
      ++expanded_;
      if (nodes_[e.node].dist < cfg_.tau) {
        goal = e.node;
        break;
      }
      expand(e.node);
    }

    SearchReport rep;
    rep.terminated_by =
        goal != kNoNode ? Termination::Threshold : Termination::Budget;
    if (goal == kNoNode) goal = best_node_;

    std::vector<std::uint16_t> rev;
    for (std::uint32_t cur = goal; cur != 0;
         cur = static_cast<std::uint32_t>(nodes_[cur].parent))
      rev.push_back(nodes_[cur].op);
    for (auto it = rev.rbegin(); it != rev.rend(); ++it)
      rep.sequence.ops.push_back(cfg_.operators[*it]);

    rep.result = apply_sequence(rep.sequence, x_);
    rep.input_distance = nodes_[0].dist;
    rep.result_distance = nodes_[goal].dist;
    rep.expanded = expanded_;
    rep.generated = generated_;
    rep.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return rep;
  }

private:
  static constexpr std::uint32_t kNoNode = 0xffffffffu;

  struct Node {
    double dist;
    std::int32_t parent;
    std::uint32_t g;
    std::uint16_t op;
  };

  void expand(std::uint32_t node) {
    Image img = materialize_cached(node);

    // Parent per-channel statistics; children differing in one plane reuse
    // the other planes' contributions unchanged.
    std::array<double, 3> mu, sq, hc;
    for (int c = 0; c < 3; ++c) mu[c] = img.channel_mean(c);
    for (int c = 0; c < 3; ++c)
      sq[c] = plane_sq_diff(img.channel(c), t_.channel(c));
    for (int c = 0; c < 3; ++c)
      hc[c] = ev_.channel_max(img.channel(c), c, mu[c]);

    std::array<std::uint64_t, 3> phash{};
    const bool dedup = cfg_.dedup == DedupMode::QuantizedHash;
    if (dedup)
      for (int c = 0; c < 3; ++c) phash[c] = plane_hash(img.channel(c));

    const std::uint32_t child_g = nodes_[node].g + 1;
    for (std::size_t oi = 0; oi < cfg_.operators.size(); ++oi) {
      const Operator& op = cfg_.operators[oi];
      const auto touched = selected_channels(op.channels);

      std::array<double, 3> csq = sq;
      std::array<double, 3> cmu = mu;
      for (int c : touched) {
        transform_plane(op.family, op.param, img.channel(c),
                        scratch_.channel(c), mu[c]);
        csq[c] = plane_sq_diff(scratch_.channel(c), t_.channel(c));
        cmu[c] = scratch_.channel_mean(c);
      }
      const double cdist = std::sqrt(csq[0] + csq[1] + csq[2]);

      ++generated_;
      const auto idx = static_cast<std::uint32_t>(nodes_.size());
      nodes_.push_back(Node{cdist, static_cast<std::int32_t>(node), child_g,
                            static_cast<std::uint16_t>(oi)});
      if (cdist < best_dist_) {
        best_dist_ = cdist;
        best_node_ = idx;
      }

      if (dedup) {
        std::uint64_t h = kFnvOffset;
        for (int c = 0; c < 3; ++c) {
          const bool mod =
              op.channels == ChannelSelector::All || touched[0] == c;
          fnv_word(h, mod ? plane_hash(scratch_.channel(c)) : phash[c]);
        }
        if (!seen_.insert(h).second) continue;
      }

      double hval;
      if (op.channels == ChannelSelector::All) {
        hval = ev_.channel_max(scratch_.channel(0), 0, cmu[0]);
        hval = ev_.channel_max(scratch_.channel(1), 1, cmu[1], hval);
        hval = ev_.channel_max(scratch_.channel(2), 2, cmu[2], hval);
      } else {
        const int c = touched[0];
        const double seed = std::max(hc[(c + 1) % 3], hc[(c + 2) % 3]);
        hval = ev_.channel_max(scratch_.channel(c), c, cmu[c], seed);
      }
      open_.push(static_cast<double>(child_g) + hval, idx);
    }

    cache_[cache_next_] = {node, std::move(img)};
    cache_next_ = (cache_next_ + 1) % cache_.size();
  }

  /// Image at a node: replay its operator chain from the nearest cached
  /// ancestor.  The cache holds the last few expanded nodes, which covers
  /// almost every pop under depth-first tie breaking.
  Image materialize_cached(std::uint32_t node) const {
    if (node == 0) return x_;
    std::vector<std::uint16_t> rev;
    const Image* base = &x_;
    for (std::uint32_t cur = node; cur != 0;
         cur = static_cast<std::uint32_t>(nodes_[cur].parent)) {
      bool cached = false;
      for (const auto& [cn, cimg] : cache_) {
        if (cn == cur) {
          base = &cimg;
          cached = true;
          break;
        }
      }
      if (cached) break;
      rev.push_back(nodes_[cur].op);
    }
    Image img = *base;
    for (auto it = rev.rbegin(); it != rev.rend(); ++it)
      img = apply(cfg_.operators[*it], img);
    return img;
  }

  static constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
  static constexpr std::uint64_t kFnvPrime = 0x00000100000001b3ull;

  static void fnv_byte(std::uint64_t& h, std::uint8_t b) noexcept {
    h = (h ^ b) * kFnvPrime;
  }
  static void fnv_word(std::uint64_t& h, std::uint64_t w) noexcept {
    for (int i = 0; i < 8; ++i) fnv_byte(h, static_cast<std::uint8_t>(w >> (8 * i)));
  }
  static std::uint64_t plane_hash(std::span<const double> plane) noexcept {
    std::uint64_t h = kFnvOffset;
    for (double v : plane)
      fnv_byte(h, static_cast<std::uint8_t>(std::lround(v * 255.0)));
    return h;
  }
  std::uint64_t image_hash(const Image& img) const noexcept {
    std::uint64_t h = kFnvOffset;
    for (int c = 0; c < 3; ++c) fnv_word(h, plane_hash(img.channel(c)));
    return h;
  }

  const Image& x_;
  const Image& t_;
  const SearchConfig& cfg_;
  HeuristicEvaluator ev_;
  OpenSet open_;
  Image scratch_;
  std::vector<Node> nodes_;
  std::unordered_set<std::uint64_t> seen_;
  std::array<std::pair<std::uint32_t, Image>, 4> cache_;
  std::size_t cache_next_ = 0;
  std::uint32_t best_node_ = 0;
  double best_dist_ = 0.0;
  std::size_t expanded_ = 0;
  std::size_t generated_ = 0;
};

} // namespace detail

/// Best-first search for an operator program taking input toward target.
///
/// Nodes carry f = depth + heuristic.  Each iteration pops the smallest-f
/// node; if its distance to the target is strictly below tau the search
/// stops there, otherwise the node is expanded into one child per operator.
/// When the expansion budget runs out instead, the closest node seen
/// anywhere (the input included, earliest seen winning ties) is reported.
/// Fully deterministic for fixed inputs and configuration.
inline SearchReport exie_search(const Image& input, const Image& target,
                                const SearchConfig& cfg = {}) {
  if (!input.same_size(target))
    throw DimensionError("search requires images of equal size");
  cfg.validate();
  detail::SearchRun run(input, target, cfg);
  return run.run();
}

} // namespace exie
