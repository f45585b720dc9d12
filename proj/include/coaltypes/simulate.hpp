#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "coaltypes/measure.hpp"
#include "coaltypes/rng.hpp"
#include "coaltypes/stats.hpp"

namespace coaltypes {

// Branch of the tree above one block, from its creation to the merger that ends
// it. Leaves are blocks 0..n-1; merged blocks get the next free id.
struct Segment {
  int block = 0;
  int parent = -1;
  double start = 0.0;
  double end = 0.0;
  bool is_external = false;

  double duration() const { return end - start; }
};

struct MergeEvent {
  double time = 0.0;
  std::vector<std::vector<int>> groups;  // blocks merged together, one group per new block
  std::vector<int> merged_into;          // new block id for each group
};

struct GenealogyRecord {
  int n = 0;
  std::vector<MergeEvent> events;  // empty unless events were requested
  std::vector<Segment> segments;   // indexed by block id, every block except the root
  int root = 0;
  int c_n = 0;    // number of merger groups, one per internal node
  int jumps = 0;  // number of non-silent events
  int i_n = 0;    // block count after the first jump
  double first_jump_time = 0.0;
};

struct MutationRecord {
  int k_n = 1;   // distinct types among the leaves
  int k_n1 = 0;  // types carried by exactly one leaf
  int m_n = 0;   // mutated external segments
  int n_n = 0;   // mutated segments

  bool bounds_hold() const { return m_n <= k_n1 && k_n1 <= k_n && k_n <= n_n + 1; }
};

enum class Engine {
  Auto,     // Lambda measures use single-merger jumps, Xi measures the paintbox
  Lambda,   // one multiple merger per jump, sized by the block-counting rates
  XiAtoms,  // exponential clocks per atom with a paintbox draw on every tick
};

class GenealogySimulator {
 public:
  GenealogySimulator(const Measure& m, int n_max, Engine engine = Engine::Auto);

  GenealogyRecord simulate(int n, Rng& rng, bool record_events = true) const;

  Engine engine() const { return engine_; }
  int n_max() const { return n_max_; }

 private:
  // One additive piece of the measure with its total jump rate at each block
  // count b <= n_max.
  struct Component {
    enum class Kind { Kingman, Star, Beta, LambdaAtom, XiAtom } kind = Kind::Kingman;
    double a = 0.0, b = 0.0;  // beta shape
    double weight = 0.0;
    double u = 0.0;           // Lambda atom location
    std::vector<double> x;    // Xi atom
    double log_norm = 0.0;    // log B(a, b) for beta pieces
    std::vector<double> rate;
  };

  GenealogyRecord simulate_lambda(int n, Rng& rng, bool record_events) const;
  GenealogyRecord simulate_xi(int n, Rng& rng, bool record_events) const;
  int draw_merger_size(const Component& c, int b, Rng& rng) const;

  Measure measure_;
  int n_max_;
  Engine engine_;
  std::vector<Component> components_;
};

// Marks each segment as carrying at least one mutation with probability
// 1 - exp(-r * duration). A leaf's type comes from its nearest marked ancestor
// segment, or the root type when there is none. r = 0 is accepted.
MutationRecord superimpose_mutations(const GenealogyRecord& g, double r, Rng& rng);

// Same statistics with Poisson mutation counts and positions on every segment;
// a reference for the Bernoulli marking above.
MutationRecord superimpose_mutations_poisson(const GenealogyRecord& g, double r, Rng& rng);

struct ReplicateStats {
  int k_n = 0;
  int k_n1 = 0;
  int m_n = 0;
  int n_n = 0;
  int c_n = 0;
  int i_n = 0;
};

struct StatSummary {
  std::vector<long long> histogram;  // histogram[v] = number of replicates with value v
  stats::RunningMoments moments;

  void add(int value);
  void merge(const StatSummary& other);
  double probability(int value) const;
};

struct MonteCarloOptions {
  unsigned threads = 0;
  bool keep_replicates = false;
  Engine engine = Engine::Auto;
};

struct MonteCarloSummary {
  int n = 0;
  double r = 0.0;
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  Engine engine = Engine::Auto;
  StatSummary k_n, k_n1, m_n, n_n, c_n, i_n;
  long long bound_violations = 0;
  std::vector<ReplicateStats> replicates;  // only with keep_replicates
};

ReplicateStats simulate_replicate(const GenealogySimulator& sim, int n, double r, Rng& rng);

MonteCarloSummary monte_carlo(const Measure& m, double r, int n, std::size_t reps, std::uint64_t seed,
                              const MonteCarloOptions& options = {});

const char* to_string(Engine e);

}  // namespace coaltypes
