// Copyright 2026 The tbfusion Authors
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

#ifndef TBFUSION_EXPERIMENT_HPP
#define TBFUSION_EXPERIMENT_HPP

/// The two-resource-state fusion experiment: Monte Carlo runner, exact
/// expectations, oracle sweep and noise calibration.

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <thread>
#include <vector>

#include "tbfusion/analysis.hpp"
#include "tbfusion/config.hpp"
#include "tbfusion/fock.hpp"
#include "tbfusion/pipeline.hpp"

namespace tbfusion {

/// Heralded spin-pair distribution of one shot: resource states from
/// cycles 0 and 1 fused on the beam splitter.
inline FusionDistribution experiment_distribution(const EmitterNoise& en, const FusionNoise& fn,
                                                  FusionRoute route = FusionRoute::Channel) {
    auto a = generate_resource_state(standard_sequence(), en, 0);
    auto b = generate_resource_state(standard_sequence(), en, 1);
    return fuse_resources(a, b, fn, route);
}

/// POVM effects of one spin readout in `basis`: [0] outcome +1, [1] outcome -1.
inline std::array<Matrix, 2> readout_effects(Basis basis, const EmitterNoise& noise) {
    Matrix dark = Matrix::Zero(2, 2), click = Matrix::Zero(2, 2);
    dark(0, 0) = 1.0 - noise.f_read_0;
    dark(1, 1) = 1.0 - noise.f_read_1;
    click(0, 0) = noise.f_read_0;
    click(1, 1) = noise.f_read_1;
    if (auto r = basis_change_rotation(basis)) {
        Matrix u = detail::with_error(*r, noise).matrix();
        dark = u.adjoint() * dark * u;
        click = u.adjoint() * click * u;
    }
    return {dark, click};
}

/// Joint readout probabilities of a two-spin state, in ++, +-, -+, -- order.
inline std::array<double, 4> joint_readout_probabilities(const DensityMatrix& spins, BasisPair pair,
                                                         const EmitterNoise& noise) {
    if (spins.num_qubits() != 2) throw StateError("joint readout needs a two-spin state");
    auto ea = readout_effects(pair.a, noise);
    auto eb = readout_effects(pair.b, noise);
    std::array<double, 4> p{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Matrix e = kron(ea[static_cast<std::size_t>(i)], eb[static_cast<std::size_t>(j)]);
            p[static_cast<std::size_t>(2 * i + j)] = std::max(0.0, (spins.matrix() * e).trace().real());
        }
    }
    return p;
}

inline double correlation_of(const std::array<double, 4>& p) {
    double n = p[0] + p[1] + p[2] + p[3];
    return (p[0] + p[3] - p[1] - p[2]) / n;
}

/// Exact outcome-class probabilities and readout correlations.
struct AnalyticResult {
    std::map<std::string, double> outcome_probabilities;  // by FusionOutcome::str()
    std::map<Condition, double> condition_probabilities;
    std::map<std::pair<Condition, BasisPair>, double> expectations;

    double error(Condition c, Basis b) const {
        auto s = stabilizer_sign(c, b);
        if (!s) throw StateError("no stabilizer for this condition and basis");
        return error_rate(expectations.at({c, BasisPair{b, b}}), *s);
    }
};

inline AnalyticResult analytic_from(const FusionDistribution& dist, const EmitterNoise& en) {
    AnalyticResult out;
    for (const auto& h : dist) {
        auto o = h.spins ? classify_pattern(h.pattern) : FusionOutcome::erasure();
        out.outcome_probabilities[o.str()] += h.probability;
    }
    auto add = [&](Condition c, const std::pair<double, std::optional<DensityMatrix>>& cs) {
        out.condition_probabilities[c] = cs.first;
        if (!cs.second) return;
        for (auto pair : all_basis_pairs()) {
            out.expectations[{c, pair}] = correlation_of(joint_readout_probabilities(*cs.second, pair, en));
        }
    };
    add(Condition::PsiPlus, class_state(dist, FusionOutcome::psi_plus()));
    add(Condition::PsiMinus, class_state(dist, FusionOutcome::psi_minus()));
    add(Condition::Phi, failure_state(dist));
    return out;
}

inline AnalyticResult analytic_expectations(const EmitterNoise& en, const FusionNoise& fn) {
    return analytic_from(experiment_distribution(en, fn), en);
}

/// Shot-level sampler built once per configuration. Joint readout
/// probabilities are cached per heralded pattern and basis pair, so a trial
/// costs two categorical draws.
class ExperimentSampler {
  public:
    ExperimentSampler(FusionDistribution dist, const EmitterNoise& en, std::vector<BasisPair> pairs)
        : dist_(std::move(dist)), pairs_(std::move(pairs)) {
        for (const auto& h : dist_) {
            weights_.push_back(h.probability);
            auto o = h.spins ? classify_pattern(h.pattern) : FusionOutcome::erasure();
            outcomes_.push_back(o);
            std::vector<std::array<double, 4>> per_pair;
            if (!o.is_erasure()) {
                for (auto p : pairs_) per_pair.push_back(joint_readout_probabilities(*h.spins, p, en));
            }
            readout_.push_back(std::move(per_pair));
        }
    }

    TrialRecord trial(std::uint64_t index, std::uint64_t seed, std::size_t pair_index) const {
        TrialRecord r;
        r.trial = index;
        r.seed = seed;
        r.bases = pairs_[pair_index];
        Rng rng(seed);
        std::size_t k = rng.categorical(weights_);
        r.outcome = outcomes_[k];
        if (r.outcome.is_erasure()) return r;
        std::size_t s = rng.categorical(readout_[k][pair_index]);
        r.readout = std::array<int, 2>{s < 2 ? +1 : -1, s % 2 == 0 ? +1 : -1};
        return r;
    }

    const FusionDistribution& distribution() const { return dist_; }

  private:
    FusionDistribution dist_;
    std::vector<BasisPair> pairs_;
    std::vector<double> weights_;
    std::vector<FusionOutcome> outcomes_;
    std::vector<std::vector<std::array<double, 4>>> readout_;
};

struct ExperimentResult {
    std::uint64_t seed = 0;
    std::uint64_t shots = 0;
    std::vector<std::pair<BasisPair, std::uint64_t>> allocation;
    CorrelationTable table;
    std::vector<TrialRecord> records;  // filled only when requested
};

/// Trial i uses the stream derive_seed(seed, 0, i) and the basis pair of the
/// allocation block it falls in. Chunks are merged in order, so the result
/// does not depend on the thread count.
inline ExperimentResult run_experiment(const RunConfig& cfg, bool keep_records = false, unsigned threads = 0) {
    cfg.validate();
    ExperimentResult res;
    res.seed = cfg.experiment.seed;
    res.shots = cfg.experiment.shots;
    res.allocation = cfg.schedule.allocate(res.shots);

    std::vector<BasisPair> pairs;
    std::vector<std::uint64_t> ends;
    std::uint64_t acc = 0;
    for (const auto& [p, n] : res.allocation) {
        pairs.push_back(p);
        acc += n;
        ends.push_back(acc);
    }
    ExperimentSampler sampler(experiment_distribution(cfg.emitter, cfg.fusion), cfg.emitter, pairs);

    const std::uint64_t chunk = 8192;
    const std::uint64_t n_chunks = (res.shots + chunk - 1) / chunk;
    std::vector<CorrelationTable> tables(n_chunks);
    if (keep_records) res.records.resize(res.shots);
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (std::uint64_t c = next++; c < n_chunks; c = next++) {
            std::uint64_t lo = c * chunk, hi = std::min(res.shots, lo + chunk);
            std::size_t pi = static_cast<std::size_t>(std::upper_bound(ends.begin(), ends.end(), lo) - ends.begin());
            for (std::uint64_t i = lo; i < hi; ++i) {
                while (i >= ends[pi]) ++pi;
                auto r = sampler.trial(i, derive_seed(res.seed, 0, i), pi);
                tables[c].add(r);
                if (keep_records) res.records[i] = std::move(r);
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, n_chunks)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& t : tables) res.table.merge(t);
    return res;
}

/// Check failed (exit code 2 at the CLI).
class CheckFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using ChannelFactory = std::function<FusionChannel(const FusionNoise&, Transmission)>;

struct OracleCheckReport {
    std::size_t points = 0;
    std::size_t patterns = 0;
    double max_probability_deviation = 0.0;
    double max_trace_distance = 0.0;        // normalized states, patterns with p > 1e-6
    double max_unnormalized_distance = 0.0;  // p * rho, every pattern
    std::string worst;

    bool pass(double tol) const {
        return max_probability_deviation < tol && max_trace_distance < tol && max_unnormalized_distance < tol;
    }
};

/// Fusion inputs for the oracle sweep: the ideal resource pair and a pair
/// generated with rotation errors, dephasing and flips.
inline std::vector<std::pair<std::string, DensityMatrix>> oracle_inputs() {
    EmitterNoise en;
    en.theta_err_pi = 0.07;
    en.theta_err_pi2 = -0.05;
    en.p_deph_cycle = 0.12;
    en.p_flip_cycle = 0.04;
    en.p_init_err = 0.02;
    auto a = generate_resource_state(standard_sequence(), en, 0);
    auto b = generate_resource_state(standard_sequence(), en, 1);
    return {{"ideal", ideal_resource_pair()}, {"noisy", tensor(*a.emitted(), *b.emitted())}};
}

inline OracleCheckReport run_oracle_check(const OracleGrid& grid, const ChannelFactory& factory = nullptr) {
    grid.validate();
    ChannelFactory make = factory ? factory : [](const FusionNoise& n, Transmission t) { return effective_channel(n, t); };
    OracleCheckReport rep;
    FusionPorts ports;
    auto inputs = oracle_inputs();
    for (double V : grid.V) {
        for (double eta : grid.eta) {
            for (double p_bg : grid.p_bg) {
                for (bool nr : grid.number_resolving) {
                    FusionNoise fn{V, eta, p_bg, nr};
                    Transmission tr{eta, eta};
                    for (const auto& [name, joint] : inputs) {
                        ++rep.points;
                        auto oracle = fock_fusion_oracle(joint, fn, tr, ports);
                        auto chan = herald_all(joint, ports, make(fn, tr));
                        std::map<DetectionPattern, const HeraldedPattern*> om, cm;
                        for (const auto& h : oracle) om[h.pattern] = &h;
                        for (const auto& h : chan) cm[h.pattern] = &h;
                        std::set<DetectionPattern> keys;
                        for (const auto& [k, v] : om) keys.insert(k);
                        for (const auto& [k, v] : cm) keys.insert(k);
                        for (const auto& k : keys) {
                            ++rep.patterns;
                            const HeraldedPattern* o = om.count(k) ? om[k] : nullptr;
                            const HeraldedPattern* c = cm.count(k) ? cm[k] : nullptr;
                            double po = o ? o->probability : 0.0, pc = c ? c->probability : 0.0;
                            auto where = [&] {
                                return name + " V=" + std::to_string(V) + " eta=" + std::to_string(eta) +
                                       " p_bg=" + std::to_string(p_bg) + (nr ? " resolving " : " threshold ") + k.str();
                            };
                            double dp = std::abs(po - pc);
                            if (dp > rep.max_probability_deviation) {
                                rep.max_probability_deviation = dp;
                                rep.worst = where();
                            }
                            Matrix mo = (o && o->spins) ? Matrix(po * o->spins->matrix()) : Matrix::Zero(4, 4);
                            Matrix mc = (c && c->spins) ? Matrix(pc * c->spins->matrix()) : Matrix::Zero(4, 4);
                            rep.max_unnormalized_distance = std::max(rep.max_unnormalized_distance, trace_distance(mo, mc));
                            if (po > 1e-6 && pc > 1e-6 && o->spins && c->spins) {
                                double td = trace_distance(*o->spins, *c->spins);
                                if (td > rep.max_trace_distance) {
                                    rep.max_trace_distance = td;
                                    if (td > rep.max_probability_deviation) rep.worst = where();
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    return rep;
}

struct CalibrationResult {
    EmitterNoise emitter;
    FusionNoise fusion;
    std::vector<std::pair<std::string, double>> parameters;
    double residual = 0.0;  // sum of squared standardized deviations
    std::vector<double> simulated;  // one per target
    int best_start = 0;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct CalibrationProblem {
    const CalibrationConfig* cfg;
    EmitterNoise en0;
    FusionNoise fn0;

    void apply(const double* x, EmitterNoise& en, FusionNoise& fn) const {
        en = en0;
        fn = fn0;
        for (std::size_t i = 0; i < cfg->parameters.size(); ++i) {
            const auto& p = cfg->parameters[i];
            set_parameter(p.name, p.lo + (p.hi - p.lo) * logistic(x[i]), en, fn);
        }
    }

    std::vector<double> rates(const EmitterNoise& en, const FusionNoise& fn) const {
        auto a = analytic_expectations(en, fn);
        std::vector<double> out;
        for (const auto& t : cfg->targets) out.push_back(a.error(t.condition, t.basis));
        return out;
    }

    double residual(const std::vector<double>& r) const {
        double s = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            double z = (r[i] - cfg->targets[i].rate) / cfg->targets[i].sigma;
            s += z * z;
        }
        return s;
    }

    double operator()(const double* x) const {
        EmitterNoise en;
        FusionNoise fn;
        apply(x, en, fn);
        try {
            return residual(rates(en, fn));
        } catch (const std::exception&) {
            return 1e12;  // a condition with no heralds
        }
    }
};

inline double calibration_f(const gsl_vector* v, void* params) {
    return (*static_cast<const CalibrationProblem*>(params))(v->data);
}

}  // namespace detail

/// Derivative-free fit of the declared noise parameters to target error
/// rates. Each parameter is mapped to its bounds by a logistic transform and
/// the Nelder-Mead simplex is restarted from seeded points; the best start wins.
inline CalibrationResult calibrate(const CalibrationConfig& cc, const EmitterNoise& base_emitter,
                                   const FusionNoise& base_fusion) {
    cc.validate();
    detail::CalibrationProblem prob{&cc, base_emitter, base_fusion};
    const std::size_t n = cc.parameters.size();
    gsl_set_error_handler_off();

    CalibrationResult best;
    best.residual = std::numeric_limits<double>::infinity();
    std::vector<double> best_x(n, 0.0);
    for (int s = 0; s < cc.starts; ++s) {
        Rng rng(derive_seed(cc.seed, 2, static_cast<std::uint64_t>(s)));
        gsl_vector* x = gsl_vector_alloc(n);
        gsl_vector* step = gsl_vector_alloc(n);
        for (std::size_t i = 0; i < n; ++i) {
            double u = s == 0 ? 0.5 : 0.05 + 0.9 * rng.uniform();
            gsl_vector_set(x, i, std::log(u / (1.0 - u)));
            gsl_vector_set(step, i, 1.0);
        }
        gsl_multimin_function f{&detail::calibration_f, n, &prob};
        gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
        gsl_multimin_fminimizer_set(m, &f, x, step);
        int it = 0, status = GSL_CONTINUE;
        while (status == GSL_CONTINUE && it < cc.max_iterations) {
            ++it;
            if (gsl_multimin_fminimizer_iterate(m)) break;
            status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), cc.tolerance);
        }
        double fval = gsl_multimin_fminimizer_minimum(m);
        if (fval < best.residual) {
            best.residual = fval;
            best.best_start = s;
            best.iterations = it;
            best.converged = status == GSL_SUCCESS;
            for (std::size_t i = 0; i < n; ++i) best_x[i] = gsl_vector_get(m->x, i);
        }
        gsl_multimin_fminimizer_free(m);
        gsl_vector_free(x);
        gsl_vector_free(step);
    }
    prob.apply(best_x.data(), best.emitter, best.fusion);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = cc.parameters[i];
        best.parameters.push_back({p.name, p.lo + (p.hi - p.lo) * detail::logistic(best_x[i])});
    }
    best.simulated = prob.rates(best.emitter, best.fusion);
    return best;
}

}  // namespace tbfusion

#endif  // TBFUSION_EXPERIMENT_HPP
