#include "coaltypes/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <string>

#include "coaltypes/errors.hpp"
#include "coaltypes/rates.hpp"
#include "coaltypes/special.hpp"

namespace coaltypes {

namespace {

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double exponential(Rng& rng, double rate) { return std::exponential_distribution<double>(rate)(rng); }

// Tree under construction: live block ids plus the segment of every block.
class TreeBuilder {
 public:
  TreeBuilder(int n, bool record_events) : record_(record_events) {
    rec_.n = n;
    rec_.segments.reserve(2 * static_cast<std::size_t>(n));
    live_.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      rec_.segments.push_back({i, -1, 0.0, 0.0, true});
      live_.push_back(i);
    }
    next_id_ = n;
  }

  std::vector<int>& live() { return live_; }
  int blocks() const { return static_cast<int>(live_.size()); }

  void begin_event(double time) {
    time_ = time;
    groups_in_event_ = 0;
    if (record_) rec_.events.push_back({time, {}, {}});
  }

  // Closes the given blocks and returns the id of the block they merge into.
  // The caller updates the live list.
  int merge(std::span<const int> group) {
    const int id = next_id_++;
    rec_.segments.push_back({id, -1, time_, 0.0, false});
    for (int b : group) {
      rec_.segments[b].parent = id;
      rec_.segments[b].end = time_;
    }
    ++groups_in_event_;
    ++rec_.c_n;
    if (record_) {
      rec_.events.back().groups.emplace_back(group.begin(), group.end());
      rec_.events.back().merged_into.push_back(id);
    }
    return id;
  }

  void end_event() {
    if (groups_in_event_ == 0) return;
    if (rec_.jumps++ == 0) {
      rec_.i_n = blocks();
      rec_.first_jump_time = time_;
    }
  }

  GenealogyRecord finish() {
    rec_.root = live_.front();
    rec_.segments.pop_back();  // the root has no branch above it
    return std::move(rec_);
  }

 private:
  bool record_;
  GenealogyRecord rec_;
  std::vector<int> live_;
  int next_id_ = 0;
  double time_ = 0.0;
  int groups_in_event_ = 0;
};

GenealogyRecord trivial_record() {
  GenealogyRecord rec;
  rec.n = 1;
  rec.root = 0;
  return rec;
}

// Merges j blocks chosen uniformly from the live list.
void merge_uniform_subset(TreeBuilder& tree, int j, Rng& rng) {
  auto& live = tree.live();
  const int b = static_cast<int>(live.size());
  for (int t = 0; t < j; ++t) {
    const int pick = std::uniform_int_distribution<int>(0, b - 1 - t)(rng);
    std::swap(live[pick], live[b - 1 - t]);
  }
  const int id = tree.merge(std::span<const int>(live.data() + (b - j), static_cast<std::size_t>(j)));
  live.resize(static_cast<std::size_t>(b - j));
  live.push_back(id);
}

}  // namespace

const char* to_string(Engine e) {
  switch (e) {
    case Engine::Auto: return "auto";
    case Engine::Lambda: return "lambda";
    case Engine::XiAtoms: return "xi-atoms";
  }
  return "?";
}

GenealogySimulator::GenealogySimulator(const Measure& m, int n_max, Engine engine)
    : measure_(m), n_max_(n_max), engine_(engine) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "sample size must be at least 1");
  if (engine_ == Engine::Auto) engine_ = m.kind() == MeasureKind::Lambda ? Engine::Lambda : Engine::XiAtoms;
  if (engine_ == Engine::Lambda && m.kind() != MeasureKind::Lambda) {
    throw Error(ErrorCode::UnsupportedMeasure,
                "single-merger engine needs a Lambda measure; Xi measures use the paintbox engine");
  }
  if (engine_ == Engine::XiAtoms && m.kind() == MeasureKind::Lambda) {
    if (!m.embeddable_as_xi()) {
      throw Error(ErrorCode::UnsupportedMeasure, "paintbox engine supports atoms only, not beta densities");
    }
    measure_ = m.as_xi();
  }
  const std::size_t size = static_cast<std::size_t>(std::max(n_max, 2)) + 1;
  if (engine_ == Engine::XiAtoms) {
    const auto& xi = measure_.xi();
    if (xi.kingman_mass > 0.0) {
      Component c;
      c.kind = Component::Kind::Kingman;
      c.rate.assign(size, 0.0);
      for (std::size_t b = 2; b < size; ++b) c.rate[b] = xi.kingman_mass * 0.5 * b * (b - 1.0);
      components_.push_back(std::move(c));
    }
    for (const auto& a : xi.atoms) {
      Component c;
      c.kind = Component::Kind::XiAtom;
      c.x = a.x;
      c.rate.assign(size, a.weight / a.self_inner());
      c.rate[0] = c.rate[1] = 0.0;
      components_.push_back(std::move(c));
    }
    return;
  }
  const auto& l = measure_.lambda();
  if (l.kingman_mass > 0.0) {
    Component c;
    c.kind = Component::Kind::Kingman;
    c.rate.assign(size, 0.0);
    for (std::size_t b = 2; b < size; ++b) c.rate[b] = l.kingman_mass * 0.5 * b * (b - 1.0);
    components_.push_back(std::move(c));
  }
  if (l.star_mass > 0.0) {
    Component c;
    c.kind = Component::Kind::Star;
    c.rate.assign(size, l.star_mass);
    c.rate[0] = c.rate[1] = 0.0;
    components_.push_back(std::move(c));
  }
  for (const auto& beta : l.beta) {
    if (beta.weight == 0.0) continue;
    Component c;
    c.kind = Component::Kind::Beta;
    c.a = beta.a;
    c.b = beta.b;
    c.weight = beta.weight;
    c.log_norm = special::log_beta(beta.a, beta.b);
    LambdaSpec alone;
    alone.beta.push_back(beta);
    c.rate = total_rates(Measure::validate(alone), static_cast<int>(size) - 1);
    components_.push_back(std::move(c));
  }
  for (const auto& atom : l.atoms) {
    Component c;
    c.kind = Component::Kind::LambdaAtom;
    c.u = atom.u;
    c.rate.assign(size, 0.0);
    for (std::size_t b = 2; b < size; ++b) {
      c.rate[b] = atom.weight * special::binomial_tail2_over_sq(static_cast<int>(b), atom.u);
    }
    components_.push_back(std::move(c));
  }
}

GenealogyRecord GenealogySimulator::simulate(int n, Rng& rng, bool record_events) const {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample size must be at least 1");
  if (n > n_max_) {
    throw Error(ErrorCode::InvalidArgument,
                "sample size " + std::to_string(n) + " exceeds the simulator's n_max " + std::to_string(n_max_));
  }
  if (n == 1) return trivial_record();
  return engine_ == Engine::Lambda ? simulate_lambda(n, rng, record_events) : simulate_xi(n, rng, record_events);
}

// Merger size J in [2, b] for one component at b blocks. The Lambda rate of a
// J-merger is C(b, J) int u^(J-2) (1-u)^(b-J) Lambda(du).
int GenealogySimulator::draw_merger_size(const Component& c, int b, Rng& rng) const {
  switch (c.kind) {
    case Component::Kind::Kingman: return 2;
    case Component::Kind::Star: return b;
    case Component::Kind::LambdaAtom: {
      if (b * c.u >= 1.0) {
        std::binomial_distribution<int> binom(b, c.u);
        for (;;) {
          const int j = binom(rng);
          if (j >= 2) return j;
        }
      }
      // Small b u: walk the conditioned binomial law upward from 2.
      double term = 0.5 * b * (b - 1.0) * std::pow(1.0 - c.u, b - 2);
      const double target = uniform01(rng) * special::binomial_tail2_over_sq(b, c.u);
      double cum = term;
      int j = 2;
      const double odds = c.u / (1.0 - c.u);
      while (cum < target && j < b) {
        term *= (b - j) / (j + 1.0) * odds;
        ++j;
        cum += term;
      }
      return j;
    }
    case Component::Kind::Beta: {
      // t_J = C(b, J) B(J + a - 2, b - J + b') / B(a, b'), summing to g(b) / weight.
      const double norm = c.rate[b] / c.weight;
      double term = std::exp(special::log_binomial(b, 2) + special::log_beta(c.a, b - 2 + c.b) - c.log_norm);
      const double target = uniform01(rng) * norm;
      double cum = term;
      int j = 2;
      while (cum < target && j < b) {
        term *= (b - j) / (j + 1.0) * (j + c.a - 2.0) / (b - j - 1.0 + c.b);
        ++j;
        cum += term;
      }
      return j;
    }
    case Component::Kind::XiAtom: break;
  }
  throw Error(ErrorCode::UnsupportedMeasure, "paintbox atom in the single-merger engine");
}

GenealogyRecord GenealogySimulator::simulate_lambda(int n, Rng& rng, bool record_events) const {
  TreeBuilder tree(n, record_events);
  double time = 0.0;
  while (tree.blocks() > 1) {
    const int b = tree.blocks();
    double total = 0.0;
    for (const auto& c : components_) total += c.rate[b];
    time += exponential(rng, total);
    double pick = uniform01(rng) * total;
    std::size_t which = components_.size() - 1;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      if (pick < components_[i].rate[b]) {
        which = i;
        break;
      }
      pick -= components_[i].rate[b];
    }
    while (components_[which].rate[b] == 0.0) --which;  // rounding at the top end
    const int j = draw_merger_size(components_[which], b, rng);
    tree.begin_event(time);
    merge_uniform_subset(tree, j, rng);
    tree.end_event();
  }
  return tree.finish();
}

GenealogyRecord GenealogySimulator::simulate_xi(int n, Rng& rng, bool record_events) const {
  TreeBuilder tree(n, record_events);
  double time = 0.0;
  std::vector<std::vector<int>> boxes;
  std::vector<int> next_live;
  while (tree.blocks() > 1) {
    const int b = tree.blocks();
    double total = 0.0;
    for (const auto& c : components_) total += c.rate[b];
    time += exponential(rng, total);
    double pick = uniform01(rng) * total;
    std::size_t which = components_.size() - 1;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      if (pick < components_[i].rate[b]) {
        which = i;
        break;
      }
      pick -= components_[i].rate[b];
    }
    const auto& c = components_[which];
    tree.begin_event(time);
    if (c.kind == Component::Kind::Kingman) {
      merge_uniform_subset(tree, 2, rng);
      tree.end_event();
      continue;
    }
    boxes.assign(c.x.size(), {});
    next_live.clear();
    for (int block : tree.live()) {
      double v = uniform01(rng);
      std::size_t box = 0;
      while (box < c.x.size() && v >= c.x[box]) v -= c.x[box++];
      if (box == c.x.size()) {
        next_live.push_back(block);  // dust
      } else {
        boxes[box].push_back(block);
      }
    }
    for (const auto& group : boxes) {
      if (group.size() == 1) next_live.push_back(group.front());
      if (group.size() >= 2) next_live.push_back(tree.merge(group));
    }
    tree.live().swap(next_live);
    tree.end_event();  // silent ticks change nothing and are not counted
  }
  return tree.finish();
}

namespace {

MutationRecord type_statistics(const GenealogyRecord& g, const std::vector<int>& mark) {
  // mark[id] is the type label a segment hands down (0 when unmutated).
  MutationRecord out;
  out.k_n = 0;
  std::vector<int> type(g.segments.size() + 1, 0);
  for (int id = static_cast<int>(g.segments.size()) - 1; id >= 0; --id) {
    const int parent = g.segments[id].parent;
    type[id] = mark[id] ? mark[id] : (parent >= 0 ? type[parent] : 0);
    if (mark[id]) {
      ++out.n_n;
      if (g.segments[id].is_external) ++out.m_n;
    }
  }
  std::vector<int> count(static_cast<std::size_t>(*std::max_element(type.begin(), type.end())) + 1, 0);
  for (int leaf = 0; leaf < g.n; ++leaf) ++count[type[leaf]];
  for (int c : count) {
    if (c > 0) ++out.k_n;
    if (c == 1) ++out.k_n1;
  }
  return out;
}

}  // namespace

MutationRecord superimpose_mutations(const GenealogyRecord& g, double r, Rng& rng) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "mutation rate must be >= 0");
  if (g.n == 1) return {1, 1, 0, 0};
  std::vector<int> mark(g.segments.size(), 0);
  if (r > 0.0) {
    for (std::size_t id = 0; id < g.segments.size(); ++id) {
      const double p = -std::expm1(-r * g.segments[id].duration());
      if (uniform01(rng) < p) mark[id] = static_cast<int>(id) + 1;
    }
  }
  return type_statistics(g, mark);
}

MutationRecord superimpose_mutations_poisson(const GenealogyRecord& g, double r, Rng& rng) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "mutation rate must be >= 0");
  if (g.n == 1) return {1, 1, 0, 0};
  // Every mutation gets its own label; a segment passes down the label of its
  // mutation closest to the leaves, i.e. the one with the smallest time.
  std::vector<int> mark(g.segments.size(), 0);
  int label = 0;
  for (std::size_t id = 0; id < g.segments.size(); ++id) {
    const auto& s = g.segments[id];
    const int count = std::poisson_distribution<int>(r * s.duration())(rng);
    double lowest = s.end;
    for (int i = 0; i < count; ++i) {
      ++label;
      const double t = s.start + uniform01(rng) * s.duration();
      if (t <= lowest) {
        lowest = t;
        mark[id] = label;
      }
    }
  }
  return type_statistics(g, mark);
}

void StatSummary::add(int value) {
  if (value < 0) throw Error(ErrorCode::InvalidArgument, "negative statistic");
  if (histogram.size() <= static_cast<std::size_t>(value)) histogram.resize(static_cast<std::size_t>(value) + 1, 0);
  ++histogram[value];
  moments.add(value);
}

void StatSummary::merge(const StatSummary& other) {
  if (histogram.size() < other.histogram.size()) histogram.resize(other.histogram.size(), 0);
  for (std::size_t v = 0; v < other.histogram.size(); ++v) histogram[v] += other.histogram[v];
  moments.merge(other.moments);
}

double StatSummary::probability(int value) const {
  if (moments.count == 0 || value < 0 || static_cast<std::size_t>(value) >= histogram.size()) return 0.0;
  return static_cast<double>(histogram[value]) / static_cast<double>(moments.count);
}

ReplicateStats simulate_replicate(const GenealogySimulator& sim, int n, double r, Rng& rng) {
  const auto g = sim.simulate(n, rng, false);
  const auto mut = superimpose_mutations(g, r, rng);
  return {mut.k_n, mut.k_n1, mut.m_n, mut.n_n, g.c_n, g.i_n};
}

MonteCarloSummary monte_carlo(const Measure& m, double r, int n, std::size_t reps, std::uint64_t seed,
                              const MonteCarloOptions& options) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "mutation rate must be positive");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample size must be at least 1");
  if (reps < 1) throw Error(ErrorCode::InvalidArgument, "reps must be at least 1");
  const GenealogySimulator sim(m, n, options.engine);
  MonteCarloSummary summary;
  summary.n = n;
  summary.r = r;
  summary.reps = reps;
  summary.seed = seed;
  summary.engine = sim.engine();
  if (options.keep_replicates) summary.replicates.resize(reps);

  struct Partial {
    StatSummary k_n, k_n1, m_n, n_n, c_n, i_n;
    long long violations = 0;
  };
  std::vector<Partial> partial(chunk_count(reps));
  for_each_chunk(reps, options.threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto& p = partial[c];
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng = replicate_stream(seed, i);
      const auto s = simulate_replicate(sim, n, r, rng);
      p.k_n.add(s.k_n);
      p.k_n1.add(s.k_n1);
      p.m_n.add(s.m_n);
      p.n_n.add(s.n_n);
      p.c_n.add(s.c_n);
      p.i_n.add(s.i_n);
      if (!(s.m_n <= s.k_n1 && s.k_n1 <= s.k_n && s.k_n <= s.n_n + 1)) ++p.violations;
      if (options.keep_replicates) summary.replicates[i] = s;
    }
  });
  for (const auto& p : partial) {
    summary.k_n.merge(p.k_n);
    summary.k_n1.merge(p.k_n1);
    summary.m_n.merge(p.m_n);
    summary.n_n.merge(p.n_n);
    summary.c_n.merge(p.c_n);
    summary.i_n.merge(p.i_n);
    summary.bound_violations += p.violations;
  }
  return summary;
}

}  // namespace coaltypes
