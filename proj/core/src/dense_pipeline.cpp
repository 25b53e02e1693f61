#include "dense_pipeline.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "tbh/elements.hpp"
#include "tbh/errors.hpp"

namespace tbh::detail {

FockRegister project_sector(const FockRegister& state, const std::vector<ModeLabel>& modes, int total) {
  if (!state.is_pure()) throw CapabilityError("sector projection expects a pure register");
  const std::size_t n = state.mode_count();
  std::vector<bool> counted(n, false);
  for (const auto& m : modes)
    if (state.has_mode(m)) counted[state.position(m)] = true;
  Vector data = state.data();
  std::vector<int> occ(n, 0);
  int sum = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (sum != total) data[i] = 0.0;
    for (std::size_t k = n; k-- > 0;) {
      if (occ[k] < state.cutoffs()[k]) {
        ++occ[k];
        if (counted[k]) ++sum;
        break;
      }
      if (counted[k]) sum -= occ[k];
      occ[k] = 0;
    }
  }
  FockRegister out = FockRegister::pure(state.modes(), state.cutoffs(), std::move(data));
  for (const auto& m : modes)
    if (out.has_mode(m) && out.cutoff(m) > total) out = resize_mode(out, m, total).first;
  return out;
}

namespace {

class Executor {
 public:
  Executor(const DenseNetwork& net, const DenseOptions& opt) : net_(net), opt_(opt) {
    for (std::size_t i = 0; i < net.sources.size(); ++i)
      for (const auto& m : net.sources[i].modes()) source_of_.emplace_back(m, i);
    inserted_.assign(net.sources.size(), false);
    state_ = FockRegister::pure({}, {}, Vector::Ones(1));
    trace_flow();
  }

  const std::vector<ModeLabel>& finals() const { return finals_; }

  // Marks which final modes matter; everything else is discarded early.
  void plan(const std::map<ModeLabel, POVMElement>& povm, const std::vector<ModeLabel>& keep) {
    povm_ = povm;
    keep_ = keep;
    needed_.clear();
    for (const auto& m : finals_) {
      const bool kept = std::find(keep.begin(), keep.end(), m) != keep.end();
      auto it = povm.find(m);
      if (kept || (it != povm.end() && !it->second.is_identity())) needed_.insert(m);
    }
    dropped_.assign(net_.steps.size(), false);
    for (std::size_t i = net_.steps.size(); i-- > 0;) {
      const auto& s = net_.steps[i];
      if (s.kind == NetworkStep::Kind::rename) {
        if (needed_.count(s.out1)) needed_.insert(s.in1);
        else dropped_[i] = true;
        continue;
      }
      if (!needed_.count(s.out1) && !needed_.count(s.out2)) {
        dropped_[i] = true;
      } else {
        needed_.insert(s.in1);
        needed_.insert(s.in2);
      }
    }
  }

  void plan_unitary() {
    needed_ = std::set<ModeLabel>(finals_.begin(), finals_.end());
    for (const auto& s : net_.steps) {
      needed_.insert(s.in1);
      if (s.kind == NetworkStep::Kind::beam_splitter) needed_.insert(s.in2);
    }
    keep_ = finals_;
    povm_.clear();
    dropped_.assign(net_.steps.size(), false);
  }

  void execute() {
    for (std::size_t i = 0; i < net_.steps.size(); ++i) {
      for (const auto& sc : net_.sectors)
        if (sc.before_step == i) apply_sector(sc);
      if (dropped_[i]) continue;
      const auto& s = net_.steps[i];
      if (s.kind == NetworkStep::Kind::rename) {
        ensure(s.in1);
        state_ = rename_mode(state_, s.in1, s.out1);
        settle({s.out1});
      } else {
        ensure(s.in1);
        ensure(s.in2);
        const int c1 = state_.cutoff(s.in1), c2 = state_.cutoff(s.in2);
        const int c = c1 + c2;
        const std::size_t rest = state_.dimension() / ((c1 + 1) * static_cast<std::size_t>(c2 + 1));
        check_budget(rest * static_cast<std::size_t>(c + 1) * static_cast<std::size_t>(c + 1));
        const Matrix m = beam_splitter_map(s.r, s.t, c1, c2, c, c);
        state_ = apply_map(state_, m, {s.in1, s.in2}, {{s.out1, c}, {s.out2, c}});
        settle({s.out1, s.out2});
      }
    }
    for (const auto& k : keep_) ensure(k);
  }

  const FockRegister& state() const { return state_; }

 private:
  void check_budget(std::size_t elements) const {
    if (elements > opt_.max_elements)
      throw MemoryBudgetError("dense engine needs " + std::to_string(elements) + " amplitudes, budget is " +
                              std::to_string(opt_.max_elements));
  }

  void trace_flow() {
    std::set<ModeLabel> live;
    for (const auto& src : net_.sources)
      for (const auto& m : src.modes()) live.insert(m);
    std::set<ModeLabel> consumed;
    auto consume = [&](const ModeLabel& l) {
      if (consumed.count(l)) throw ModeError("mode " + to_string(l) + " is consumed twice");
      consumed.insert(l);
      live.erase(l);
    };
    for (const auto& s : net_.steps) {
      consume(s.in1);
      if (s.kind == NetworkStep::Kind::beam_splitter) consume(s.in2);
      for (const ModeLabel* o : {&s.out1, &s.out2}) {
        if (s.kind == NetworkStep::Kind::rename && o == &s.out2) continue;
        if (live.count(*o)) throw ModeError("mode " + to_string(*o) + " is produced twice");
        live.insert(*o);
        consumed.erase(*o);
      }
    }
    finals_.assign(live.begin(), live.end());
  }

  bool is_final(const ModeLabel& l) const {
    return std::find(finals_.begin(), finals_.end(), l) != finals_.end();
  }
  bool is_kept(const ModeLabel& l) const { return std::find(keep_.begin(), keep_.end(), l) != keep_.end(); }

  void ensure(const ModeLabel& l) {
    if (state_.has_mode(l)) return;
    for (const auto& [m, i] : source_of_) {
      if (!(m == l) || inserted_[i]) continue;
      inserted_[i] = true;
      const FockRegister& src = net_.sources[i];
      check_budget(state_.dimension() * src.dimension());
      state_ = tensor_product(state_, src);
      std::vector<ModeLabel> pending;
      for (const auto& sm : src.modes())
        if (is_final(sm) || !needed_.count(sm)) pending.push_back(sm);
      // Source modes that are final or never used are settled right away.
      settle(pending);
      if (!state_.has_mode(l)) throw ModeError("mode " + to_string(l) + " was discarded before use");
      return;
    }
    state_ = tensor_product(state_, FockRegister::vacuum({l}, {0}));
  }

  void trace_out(const ModeLabel& l) {
    state_ = trace_into_environment(state_, {l}, opt_.env_tolerance);
  }

  void shrink(const ModeLabel& l) {
    const std::vector<double> p = marginal_distribution(state_, l);
    double total = 0;
    for (double x : p) total += x;
    double tail = 0;
    int cut = static_cast<int>(p.size()) - 1;
    while (cut > 0 && tail + p[static_cast<std::size_t>(cut)] <= opt_.eps_trunc * total) {
      tail += p[static_cast<std::size_t>(cut)];
      --cut;
    }
    if (cut < state_.cutoff(l)) state_ = resize_mode(state_, l, cut).first;
  }

  // Decides the fate of freshly produced modes.
  void settle(const std::vector<ModeLabel>& labels) {
    std::vector<ModeLabel> to_shrink, to_measure, to_trace;
    for (const auto& l : labels) {
      if (!state_.has_mode(l)) continue;
      if (is_final(l) && !is_kept(l)) {
        auto it = povm_.find(l);
        if (it == povm_.end() || it->second.is_identity()) {
          to_trace.push_back(l);
        } else if (it->second.kind() == POVMKind::fock) {
          // Kraus row <n|: the mode disappears.
          const int n = it->second.photon_number();
          const int c = state_.cutoff(l);
          Matrix row = Matrix::Zero(1, c + 1);
          if (n <= c) row(0, n) = 1.0;
          state_ = apply_map(state_, row, {l}, {});
        } else {
          to_measure.push_back(l);
        }
      } else if (!is_final(l) && !needed_.count(l)) {
        to_trace.push_back(l);
      } else {
        to_shrink.push_back(l);
      }
    }
    for (const auto& l : to_shrink) shrink(l);
    for (const auto& l : to_measure) {
      shrink(l);
      state_ = apply_povm_root(state_, l, povm_.at(l));
      trace_out(l);
    }
    for (const auto& l : to_trace) trace_out(l);
  }

  void apply_sector(const SectorConstraint& sc) {
    for (const auto& m : sc.modes) {
      bool from_source = false;
      for (const auto& [sm, i] : source_of_) from_source = from_source || (sm == m && !inserted_[i]);
      if (from_source) ensure(m);
    }
    state_ = project_sector(state_, sc.modes, sc.total);
  }

  const DenseNetwork& net_;
  DenseOptions opt_;
  std::vector<std::pair<ModeLabel, std::size_t>> source_of_;
  std::vector<bool> inserted_;
  std::vector<ModeLabel> finals_;
  std::set<ModeLabel> needed_;
  std::vector<bool> dropped_;
  std::map<ModeLabel, POVMElement> povm_;
  std::vector<ModeLabel> keep_;
  FockRegister state_;
};

}  // namespace

ConditionalOperator run_streaming(const DenseNetwork& net, const HeraldStrategy& strategy,
                                  const DenseOptions& options) {
  Executor ex(net, options);
  const auto povm = strategy.resolve(ex.finals());
  ex.plan(povm, strategy.kept);
  ex.execute();
  FockRegister rho = reorder(partial_trace(ex.state(), strategy.kept), strategy.kept);
  const double p = rho.trace();
  return {std::move(rho), p};
}

FockRegister run_unitary(const DenseNetwork& net, const std::vector<ModeLabel>& order,
                         const DenseOptions& options) {
  Executor ex(net, options);
  ex.plan_unitary();
  ex.execute();
  return reorder(ex.state(), order);
}

}  // namespace tbh::detail
