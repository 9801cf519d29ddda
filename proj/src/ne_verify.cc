// Copyright 2026 The apgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "apgame/ne_verify.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "apgame/errors.h"
#include "apgame/parallel.h"
#include "apgame/rng.h"

namespace apgame {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kPi = 3.14159265358979323846;

class DeviationRng {
 public:
  DeviationRng(uint64_t seed, int player, int index)
      : gen_(seed), player_(static_cast<uint32_t>(player)),
        index_(static_cast<uint32_t>(index)) {}
  double Uniform() { return Next()[0]; }
  double Normal() {
    const auto c = Counter();
    return gen_.Normals(c)[0];
  }

 private:
  Philox4x32::Counter Counter() {
    return {index_, draw_++, kStreamDeviation, player_};
  }
  std::array<double, 2> Next() { return gen_.Uniforms(Counter()); }
  Philox4x32 gen_;
  uint32_t player_, index_, draw_ = 0;
};

// Replaces the shift so that base + shift stays inside [-L, L].
bool ClipShift(const StrategyProfile& base, int player, double bound,
               VectorXd* shift) {
  if (!std::isfinite(bound) || !base.IsDeterministic()) return false;
  const MatrixXd u0 = base.Realize(MatrixXd::Zero(base.n_players(), base.grid().n_steps()));
  bool clipped = false;
  for (int k = 0; k < shift->size(); ++k) {
    const double v = u0(player, k) + (*shift)(k);
    const double c = std::clamp(v, -bound, bound);
    if (c != v) {
      clipped = true;
      (*shift)(k) = c - u0(player, k);
    }
  }
  return clipped;
}

bool ClipRow(MatrixXd* u, int player, double bound) {
  if (!std::isfinite(bound)) return false;
  bool clipped = false;
  for (int k = 0; k < u->cols(); ++k) {
    double& v = (*u)(player, k);
    if (std::abs(v) > bound) {
      v = std::clamp(v, -bound, bound);
      clipped = true;
    }
  }
  return clipped;
}

double PathValue(const GeneralGameSpec& spec, const TimeGrid& grid,
                 const MatrixXd& x, const MatrixXd& u, int i) {
  double v = 0.0;
  VectorXd xk, uk;
  for (int k = 0; k < grid.n_steps(); ++k) {
    xk = x.col(k);
    uk = u.col(k);
    v += spec.running->Value(i, grid.t(k), xk, uk) * grid.dt(k);
  }
  return v + spec.terminal->Value(i, x.col(grid.n_steps()));
}

Verdict Compare(double estimate, double se, double z, double reference) {
  if (estimate - z * se > reference) return Verdict::kViolated;
  if (estimate + z * se <= reference) return Verdict::kConsistent;
  return Verdict::kInconclusive;
}

Verdict Combine(Verdict a, Verdict b) {
  if (a == Verdict::kViolated || b == Verdict::kViolated) return Verdict::kViolated;
  if (a == Verdict::kInconclusive || b == Verdict::kInconclusive) {
    return Verdict::kInconclusive;
  }
  return Verdict::kConsistent;
}

McEstimate Paired(const std::vector<double>& s, const NoiseBatch& noise,
                  const std::string& id) {
  return FromSamples(s, noise, id);
}

std::string Fmt(double v) {
  std::ostringstream o;
  o << std::setprecision(6) << std::scientific << v;
  return o.str();
}

}  // namespace

std::string DeviationKindName(DeviationKind k) {
  switch (k) {
    case DeviationKind::kScaled: return "scaled";
    case DeviationKind::kTimeBump: return "time-bump";
    case DeviationKind::kFeedbackTilt: return "feedback-tilt";
    case DeviationKind::kRandomPath: return "random-path";
    case DeviationKind::kGradientTilt: return "gradient-tilt";
  }
  return "?";
}

DeviationKind ParseDeviationKind(const std::string& s) {
  for (auto k : {DeviationKind::kScaled, DeviationKind::kTimeBump,
                 DeviationKind::kFeedbackTilt, DeviationKind::kRandomPath,
                 DeviationKind::kGradientTilt}) {
    if (DeviationKindName(k) == s) return k;
  }
  throw ConfigError("unknown deviation kind '" + s + "'", "kind");
}

std::string VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kConsistent: return "consistent";
    case Verdict::kViolated: return "violated";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<Deviation> SampleDeviations(const StrategyProfile& base, int player,
                                        DeviationKind kind, int count,
                                        uint64_t seed,
                                        const DeviationOptions& opts) {
  if (count < 1) throw Error("deviation count must be >= 1");
  if (player < 0 || player >= base.n_players()) throw Error("player out of range");
  const TimeGrid& grid = base.grid();
  const int steps = grid.n_steps();
  const double horizon = grid.horizon();
  std::vector<Deviation> out;
  for (int c = 0; c < count; ++c) {
    DeviationRng rng(seed, player, c);
    Deviation d;
    d.player = player;
    d.kind = kind;
    std::ostringstream label;
    label << DeviationKindName(kind);
    switch (kind) {
      case DeviationKind::kScaled: {
        const double lambda = 2.0 * rng.Uniform();
        d.profile = base.Scaled(player, lambda);
        label << "(lambda=" << lambda << ")";
        if (std::isfinite(opts.control_bound) && base.IsDeterministic()) {
          VectorXd shift = (lambda - 1.0) *
              base.Realize(MatrixXd::Zero(base.n_players(), steps)).row(player).transpose();
          if (ClipShift(base, player, opts.control_bound, &shift)) {
            d.profile = base.Shifted(player, shift, 1.0);
            d.clipped = true;
          }
        }
        break;
      }
      case DeviationKind::kTimeBump: {
        double t1 = rng.Uniform() * horizon, t2 = rng.Uniform() * horizon;
        if (t1 > t2) std::swap(t1, t2);
        const double amp = opts.amplitude * (2.0 * rng.Uniform() - 1.0);
        VectorXd shift = VectorXd::Zero(steps);
        for (int k = 0; k < steps; ++k) {
          if (grid.t(k) >= t1 && grid.t(k) < t2) shift(k) = amp;
        }
        d.clipped = ClipShift(base, player, opts.control_bound, &shift);
        d.profile = base.Shifted(player, shift, 1.0);
        label << "(c=" << amp << ",[" << t1 << "," << t2 << "])";
        break;
      }
      case DeviationKind::kFeedbackTilt: {
        if (!base.HasFeedback()) {
          throw Error("feedback-tilt deviations need a feedback base profile");
        }
        const int dim = 4 * base.n_players();
        VectorXd delta(dim);
        for (int j = 0; j < dim; ++j) {
          delta(j) = 0.3 * opts.amplitude * rng.Normal() / std::sqrt(double(dim));
        }
        d.profile = base.GainTilted(player, delta);
        label << "(|delta|=" << delta.norm() << ")";
        break;
      }
      case DeviationKind::kRandomPath: {
        VectorXd shift = VectorXd::Zero(steps);
        for (int m = 1; m <= 4; ++m) {
          const double a = rng.Normal(), b = rng.Normal();
          for (int k = 0; k < steps; ++k) {
            const double w = m * kPi * grid.t(k) / horizon;
            shift(k) += 0.5 * opts.amplitude * (a * std::cos(w) + b * std::sin(w)) / m;
          }
        }
        if (std::isfinite(opts.control_bound) && !base.IsDeterministic()) {
          const double peak = shift.cwiseAbs().maxCoeff();
          if (peak > opts.control_bound) {
            shift *= opts.control_bound / peak;
            d.clipped = true;
          }
        }
        d.clipped = ClipShift(base, player, opts.control_bound, &shift) || d.clipped;
        d.profile = base.Shifted(player, shift, 1.0);
        label << "(|path|_inf=" << shift.cwiseAbs().maxCoeff() << ")";
        break;
      }
      case DeviationKind::kGradientTilt:
        throw Error("gradient-tilt deviations need the game; use GradientTiltDeviations");
    }
    d.label = label.str();
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<Deviation> GradientTiltDeviations(const GeneralGameSpec& spec,
                                              const StrategyProfile& base,
                                              int player, int count,
                                              const NoiseBatch& noise,
                                              const DeviationOptions& opts,
                                              int blocks) {
  if (count < 1) throw Error("deviation count must be >= 1");
  const int steps = noise.grid().n_steps();
  blocks = std::max(1, std::min(blocks, steps));
  VectorXd direction = VectorXd::Zero(steps);
  for (int b = 0; b < blocks; ++b) {
    const int lo = b * steps / blocks, hi = (b + 1) * steps / blocks;
    VectorXd ind = VectorXd::Zero(steps);
    ind.segment(lo, hi - lo).setOnes();
    const McEstimate g =
        EstimateLinearDerivative(spec, base, player, player, ind, noise);
    direction.segment(lo, hi - lo).setConstant(-g.value);
  }
  const double peak = direction.cwiseAbs().maxCoeff();
  std::vector<Deviation> out;
  for (int c = 0; c < count; ++c) {
    Deviation d;
    d.player = player;
    d.kind = DeviationKind::kGradientTilt;
    // Sizes alternate between descent and ascent sides and shrink by half
    // every other trial.
    const double eps = opts.amplitude * std::pow(0.5, c / 2) * (c % 2 == 0 ? 1.0 : -0.25);
    VectorXd shift = peak > 0.0 ? VectorXd(direction * (eps / peak)) : VectorXd::Zero(steps);
    d.clipped = ClipShift(base, player, opts.control_bound, &shift);
    d.profile = base.Shifted(player, shift, 1.0);
    std::ostringstream label;
    label << "gradient-tilt(eps=" << eps << ")";
    d.label = label.str();
    out.push_back(std::move(d));
  }
  return out;
}

PhiEvaluator LiftedPhi(const LqGameSpec& spec, const TimeGrid& grid,
                       const QuadratureRule& rule) {
  auto lm = std::make_shared<LiftedMatrices>(BuildLiftedMatrices(spec));
  const VectorXd x0 = spec.x0;
  return {"phi_lq_lifted", grid,
          [lm, x0, grid, rule](const MatrixXd& u, const MatrixXd& dw) {
            return PathPotentialLq(*lm, grid, x0, u, dw, rule);
          }};
}

PhiEvaluator SensitivityPhi(const GeneralGameSpec& spec, const TimeGrid& grid,
                            const QuadratureRule& rule) {
  return {"phi_sensitivity", grid,
          [spec, grid, rule](const MatrixXd& u, const MatrixXd& dw) {
            return PathPotentialSensitivity(spec, grid, u, dw, rule);
          }};
}

double BonferroniZ(int comparisons) {
  boost::math::normal_distribution<double> nd;
  const double level = 2.0 * boost::math::cdf(boost::math::complement(nd, 3.0));
  const double tail = level / (2.0 * std::max(1, comparisons));
  return boost::math::quantile(boost::math::complement(nd, tail));
}

AlphaCheckReport CheckAlphaPotential(const GeneralGameSpec& spec,
                                     const StrategyProfile& base,
                                     const std::vector<Deviation>& deviations,
                                     const NoiseBatch& noise,
                                     const PhiEvaluator& phi,
                                     double alpha_reference, double slack) {
  CheckCompatible(spec.n_players, base, noise);
  if (!(phi.grid == noise.grid())) {
    throw Error("potential estimator and noise batch use different grids");
  }
  for (const auto& d : deviations) {
    CheckCompatible(spec.n_players, d.profile, noise);
    const auto mod = d.profile.ModifiedPlayers();
    for (int p : mod) {
      if (p != d.player) throw Error("deviation " + d.label + " is not unilateral");
    }
  }
  const TimeGrid& grid = noise.grid();
  const int m = noise.n_paths();
  const int n = spec.n_players;
  std::vector<VectorXd> v_base(m);
  std::vector<double> phi_base(m);
  ParallelFor(m, [&](int p) {
    const MatrixXd dw = noise.Increments(p);
    const MatrixXd u = base.Realize(dw);
    const MatrixXd x = EulerState(spec, grid, u, dw);
    v_base[p] = PathValues(spec, grid, x, u);
    phi_base[p] = phi.path(u, dw);
  });

  AlphaCheckReport rep;
  rep.alpha_reference = alpha_reference;
  rep.slack = slack;
  rep.z = BonferroniZ(static_cast<int>(deviations.size()));
  rep.trials.resize(deviations.size());
  ParallelFor(static_cast<int>(deviations.size()), [&](int t) {
    const Deviation& d = deviations[t];
    std::vector<double> dv(m), dphi(m), diff(m);
    bool clipped = d.clipped;
    for (int p = 0; p < m; ++p) {
      const MatrixXd dw = noise.Increments(p);
      MatrixXd u = d.profile.Realize(dw);
      clipped = ClipRow(&u, d.player, spec.control_bound) || clipped;
      const MatrixXd x = EulerState(spec, grid, u, dw);
      dv[p] = PathValue(spec, grid, x, u, d.player) - v_base[p](d.player);
      dphi[p] = phi.path(u, dw) - phi_base[p];
      diff[p] = dv[p] - dphi[p];
    }
    DeviationTrial& tr = rep.trials[t];
    tr.player = d.player;
    tr.kind = DeviationKindName(d.kind);
    tr.label = d.label;
    tr.d_v = Paired(dv, noise, "dV" + std::to_string(d.player + 1));
    tr.d_phi = Paired(dphi, noise, "d" + phi.id);
    const SampleStats g = MeanAndStdError(diff);
    tr.gap = std::abs(g.mean);
    tr.gap_std_error = g.std_error;
    tr.clipped = clipped;
  });
  (void)n;
  rep.verdict = Verdict::kConsistent;
  for (size_t t = 0; t < rep.trials.size(); ++t) {
    const auto& tr = rep.trials[t];
    if (rep.argmax_trial < 0 || tr.gap > rep.max_gap) {
      rep.max_gap = tr.gap;
      rep.max_gap_std_error = tr.gap_std_error;
      rep.argmax_trial = static_cast<int>(t);
    }
    rep.verdict = Combine(rep.verdict, Compare(tr.gap, tr.gap_std_error, rep.z,
                                               alpha_reference + slack));
  }
  return rep;
}

nlohmann::json AlphaCheckReport::ToJson() const {
  nlohmann::json j;
  j["max_gap"] = max_gap;
  j["max_gap_std_error"] = max_gap_std_error;
  j["argmax_trial"] = argmax_trial;
  j["alpha_reference"] = alpha_reference;
  j["slack"] = slack;
  j["z"] = z;
  j["verdict"] = VerdictName(verdict);
  j["trials"] = nlohmann::json::array();
  for (const auto& t : trials) {
    j["trials"].push_back({{"player", t.player + 1},
                           {"kind", t.kind},
                           {"label", t.label},
                           {"dV", t.d_v.ToJson()},
                           {"dPhi", t.d_phi.ToJson()},
                           {"gap", t.gap},
                           {"gap_std_error", t.gap_std_error},
                           {"clipped", t.clipped}});
  }
  return j;
}

std::string AlphaCheckReport::ToTable() const {
  std::ostringstream o;
  o << "player  kind           dV             dPhi           gap            sigma          verdict\n";
  for (const auto& t : trials) {
    o << std::left << std::setw(8) << t.player + 1 << std::setw(15) << t.kind
      << std::setw(15) << Fmt(t.d_v.value) << std::setw(15) << Fmt(t.d_phi.value)
      << std::setw(15) << Fmt(t.gap) << std::setw(15) << Fmt(t.gap_std_error)
      << VerdictName(Compare(t.gap, t.gap_std_error, z, alpha_reference + slack))
      << (t.clipped ? " (clipped)" : "") << "\n";
  }
  o << "max gap " << Fmt(max_gap) << " +- " << Fmt(max_gap_std_error)
    << " vs alpha " << Fmt(alpha_reference) << ": " << VerdictName(verdict) << "\n";
  return o.str();
}

NeReport CheckNe(const GeneralGameSpec& spec, const StrategyProfile& base,
                 const std::vector<Deviation>& deviations,
                 const NoiseBatch& noise, double alpha_reference, double slack,
                 std::string control_id) {
  CheckCompatible(spec.n_players, base, noise);
  const TimeGrid& grid = noise.grid();
  const int m = noise.n_paths();
  const int n = spec.n_players;
  std::vector<VectorXd> v_base(m);
  ParallelFor(m, [&](int p) {
    const MatrixXd dw = noise.Increments(p);
    const MatrixXd u = base.Realize(dw);
    v_base[p] = PathValues(spec, grid, EulerState(spec, grid, u, dw), u);
  });
  struct Result {
    double mean = 0.0, se = 0.0;
    bool clipped = false;
  };
  std::vector<Result> res(deviations.size());
  ParallelFor(static_cast<int>(deviations.size()), [&](int t) {
    const Deviation& d = deviations[t];
    CheckCompatible(n, d.profile, noise);
    std::vector<double> imp(m);
    bool clipped = d.clipped;
    for (int p = 0; p < m; ++p) {
      const MatrixXd dw = noise.Increments(p);
      MatrixXd u = d.profile.Realize(dw);
      clipped = ClipRow(&u, d.player, spec.control_bound) || clipped;
      const MatrixXd x = EulerState(spec, grid, u, dw);
      imp[p] = v_base[p](d.player) - PathValue(spec, grid, x, u, d.player);
    }
    const SampleStats s = MeanAndStdError(imp);
    res[t] = {s.mean, s.std_error, clipped};
  });

  NeReport rep;
  rep.control_id = std::move(control_id);
  rep.alpha_reference = alpha_reference;
  rep.slack = slack;
  rep.z = BonferroniZ(static_cast<int>(deviations.size()));
  rep.players.resize(n);
  for (int i = 0; i < n; ++i) rep.players[i].player = i;
  for (size_t t = 0; t < deviations.size(); ++t) {
    PlayerImprovement& pi = rep.players[deviations[t].player];
    pi.n_trials++;
    if (res[t].clipped) pi.n_clipped++;
    if (res[t].mean > pi.improvement) {
      pi.improvement = res[t].mean;
      pi.std_error = res[t].se;
      pi.best_label = deviations[t].label;
    }
    pi.verdict = Combine(pi.verdict, Compare(res[t].mean, res[t].se, rep.z,
                                             alpha_reference + slack));
  }
  rep.verdict = Verdict::kConsistent;
  for (const auto& pi : rep.players) rep.verdict = Combine(rep.verdict, pi.verdict);
  return rep;
}

NeReport CheckEpsilonNe(const LqGameSpec& spec, const RiccatiSolution& sol,
                        const NeBudget& budget, const NoiseBatch& noise,
                        double alpha_reference, double slack) {
  const GeneralGameSpec general = ToGeneral(spec);
  const StrategyProfile base =
      StrategyProfile::Feedback(FeedbackLaw::FromRiccati(spec, sol, noise.grid()));
  DeviationOptions opts = budget.options;
  if (!std::isfinite(opts.control_bound)) opts.control_bound = spec.control_bound;
  std::vector<Deviation> devs;
  auto append = [&](std::vector<Deviation> v) {
    for (auto& d : v) devs.push_back(std::move(d));
  };
  for (int i = 0; i < spec.n_players; ++i) {
    const uint64_t s = budget.seed + 7919u * static_cast<uint64_t>(i);
    if (budget.scaled > 0) {
      append(SampleDeviations(base, i, DeviationKind::kScaled, budget.scaled, s, opts));
    }
    if (budget.time_bump > 0) {
      append(SampleDeviations(base, i, DeviationKind::kTimeBump, budget.time_bump, s + 1, opts));
    }
    if (budget.feedback_tilt > 0) {
      append(SampleDeviations(base, i, DeviationKind::kFeedbackTilt, budget.feedback_tilt, s + 2, opts));
    }
    if (budget.random_path > 0) {
      append(SampleDeviations(base, i, DeviationKind::kRandomPath, budget.random_path, s + 3, opts));
    }
    if (budget.gradient_tilt > 0) {
      append(GradientTiltDeviations(general, base, i, budget.gradient_tilt, noise, opts));
    }
  }
  return CheckNe(general, base, devs, noise, alpha_reference, slack, "riccati_feedback");
}

nlohmann::json NeReport::ToJson() const {
  nlohmann::json j;
  j["control_id"] = control_id;
  j["alpha_reference"] = alpha_reference;
  j["slack"] = slack;
  j["z"] = z;
  j["verdict"] = VerdictName(verdict);
  j["players"] = nlohmann::json::array();
  for (const auto& p : players) {
    j["players"].push_back({{"player", p.player + 1},
                            {"best_improvement", p.improvement},
                            {"std_error", p.std_error},
                            {"best_deviation", p.best_label},
                            {"n_trials", p.n_trials},
                            {"n_clipped", p.n_clipped},
                            {"verdict", VerdictName(p.verdict)}});
  }
  return j;
}

std::string NeReport::ToTable() const {
  std::ostringstream o;
  o << "player  best deviation                          improvement    sigma          verdict\n";
  for (const auto& p : players) {
    o << std::left << std::setw(8) << p.player + 1 << std::setw(40)
      << p.best_label.substr(0, 39) << std::setw(15) << Fmt(p.improvement)
      << std::setw(15) << Fmt(p.std_error) << VerdictName(p.verdict) << "\n";
  }
  o << "reference " << Fmt(alpha_reference) << " + slack " << Fmt(slack) << ": "
    << VerdictName(verdict) << "\n";
  return o.str();
}

RefinementBiasReport RefinementBias(const LqGameSpec& spec, int n_steps,
                                    int n_paths, uint64_t seed) {
  const int n = spec.n_players;
  const TimeGrid coarse = TimeGrid::Uniform(spec.horizon, n_steps);
  const TimeGrid fine = TimeGrid::Uniform(spec.horizon, 2 * n_steps);
  const GeneralGameSpec general = ToGeneral(spec);
  const auto law_c = FeedbackLaw::FromRiccati(spec, SolveRiccati(spec, coarse), coarse);
  const auto law_f = FeedbackLaw::FromRiccati(spec, SolveRiccati(spec, fine), fine);
  const NoiseBatch noise = NoiseBatch::Make(seed, n_paths, fine, n);
  std::vector<VectorXd> d(n_paths);
  ParallelFor(n_paths, [&](int p) {
    const MatrixXd dwf = noise.Increments(p);
    MatrixXd dwc(n, n_steps);
    for (int k = 0; k < n_steps; ++k) dwc.col(k) = dwf.col(2 * k) + dwf.col(2 * k + 1);
    MatrixXd f, uc, uf;
    law_c->Run(dwc, &f, &uc);
    law_f->Run(dwf, &f, &uf);
    const VectorXd vc = PathValues(general, coarse, EulerState(general, coarse, uc, dwc), uc);
    const VectorXd vf = PathValues(general, fine, EulerState(general, fine, uf, dwf), uf);
    d[p] = vc - vf;
  });
  RefinementBiasReport rep;
  rep.n_steps = n_steps;
  rep.delta.resize(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> s(n_paths);
    for (int p = 0; p < n_paths; ++p) s[p] = d[p](i);
    const SampleStats st = MeanAndStdError(s);
    rep.delta[i] = st.mean;
    if (std::abs(st.mean) >= rep.max_abs_delta) {
      rep.max_abs_delta = std::abs(st.mean);
      rep.std_error = st.std_error;
    }
  }
  return rep;
}

DiscreteOptimum SinglePlayerDiscreteOptimum(const LqGameSpec& spec,
                                            const TimeGrid& grid) {
  if (spec.n_players != 1) throw Error("single-player oracle needs n_players = 1");
  const int steps = grid.n_steps();
  // x_n = b + c^T u for the Euler recursion x_{k+1} = (1 + a_k dt_k) x_k + dt_k u_k.
  VectorXd c(steps);
  double b = spec.x0(0), tail = 1.0;
  for (int k = 0; k < steps; ++k) b *= 1.0 + spec.a_fn[0](grid.t(k)) * grid.dt(k);
  for (int k = steps - 1; k >= 0; --k) {
    c(k) = grid.dt(k) * tail;
    tail *= 1.0 + spec.a_fn[0](grid.t(k)) * grid.dt(k);
  }
  const double gamma = spec.gamma(0), target = spec.d(0);
  // Stationarity: 2 dt_k u_k + 2 gamma s c_k = 0 with s = x_n - d.
  VectorXd cw(steps);
  for (int k = 0; k < steps; ++k) cw(k) = c(k) * c(k) / grid.dt(k);
  const double s = (b - target) / (1.0 + gamma * cw.sum());
  DiscreteOptimum opt;
  opt.u.resize(1, steps);
  double v = 0.0;
  for (int k = 0; k < steps; ++k) {
    opt.u(0, k) = -gamma * s * c(k) / grid.dt(k);
    v += opt.u(0, k) * opt.u(0, k) * grid.dt(k);
  }
  opt.value = v + gamma * s * s;
  return opt;
}

}  // namespace apgame
