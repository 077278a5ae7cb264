// Independent reference implementations used only as test oracles. These are
// deliberately written from the defining formulas rather than through the
// library's code paths.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "bellplan/distillation.hpp"
#include "bellplan/error_model.hpp"

namespace oracle {

// Plain-pow transliteration of the logical-error-rate model.
inline double logical_error_rate(int d, double p_bell, double p_local,
                                 const bellplan::FittedModelParams& P = {}) {
    const double A = p_bell / P.p_th_bell;
    const double B = p_local / P.p_th_local;
    const double M = 1.0 + P.alpha_c * p_local * P.p_th_bell / (1.0 - std::sqrt(B));
    double bracket = std::pow(A, (d + 1) / 2.0) + std::pow(B, (d + 1) / 2.0);
    for (int g = 1; g <= d; ++g) {
        bracket += std::pow(A * M * M, g / 2.0) * std::pow(B, (d + 1 - g) / 2.0);
    }
    const double p = P.kappa * std::pow(d + 1.0, P.eta) * bracket;
    return std::min(1.0, std::max(0.0, p));
}

// Published single-round recurrences for two-pair purification at p_local=0.
// Components ordered (I, X, Y, Z) relative to the target Bell state.
struct Recurrence {
    std::array<double, 4> out;
    double p_succ;
};

inline Recurrence dejmps_round(const std::array<double, 4>& a,
                               const std::array<double, 4>& b) {
    // With both parties rotating so the Y and Z components exchange, the
    // post-selected map on (I, X, Y, Z) weights is:
    //   I' = (aI bI + aY bY) / N,  Y' = (aI bY + aY bI) / N,
    //   X' = (aX bX + aZ bZ) / N,  Z' = (aX bZ + aZ bX) / N,
    //   N  = (aI + aY)(bI + bY) + (aX + aZ)(bX + bZ).
    const double n = (a[0] + a[2]) * (b[0] + b[2]) + (a[1] + a[3]) * (b[1] + b[3]);
    Recurrence r;
    r.p_succ = n;
    r.out = {(a[0] * b[0] + a[2] * b[2]) / n, (a[1] * b[1] + a[3] * b[3]) / n,
             (a[0] * b[2] + a[2] * b[0]) / n, (a[1] * b[3] + a[3] * b[1]) / n};
    return r;
}

inline Recurrence bbpssw_round(double fidelity) {
    const double F = fidelity;
    const double rest = (1.0 - F) / 3.0;
    const double n = F * F + 2.0 * F * rest + 5.0 * rest * rest;
    const double f_out = (F * F + rest * rest) / n;
    Recurrence r;
    r.p_succ = n;
    const double w = (1.0 - f_out) / 3.0;
    r.out = {f_out, w, w, w};
    return r;
}

// Exhaustive enumeration over the 16 joint Pauli-frame configurations of two
// input pairs pushed through the purification circuit (noiseless), keeping
// runs where the bilateral parity check passes.
inline Recurrence enumerate_two_pair(const std::array<double, 4>& tgt,
                                     const std::array<double, 4>& anc,
                                     bool dejmps_rotation) {
    auto xbit = [](int l) { return l == 1 || l == 2 ? 1 : 0; };
    auto zbit = [](int l) { return l == 2 || l == 3 ? 1 : 0; };
    auto from = [](int x, int z) { return x ? (z ? 2 : 1) : (z ? 3 : 0); };
    auto rot = [&](int l) { return dejmps_rotation ? (l == 2 ? 3 : (l == 3 ? 2 : l)) : l; };

    std::array<double, 4> out{};
    double pass = 0.0;
    for (int lt = 0; lt < 4; ++lt) {
        for (int la = 0; la < 4; ++la) {
            const double w = tgt[lt] * anc[la];
            const int t = rot(lt), a = rot(la);
            // CNOT (target pair controls ancilla pair), then bilateral Z
            // measurement of the ancilla: parity is the ancilla's X frame bit.
            const int a_x = xbit(a) ^ xbit(t);
            if (a_x != 0) continue;
            const int t_out = from(xbit(t), zbit(t) ^ zbit(a));
            pass += w;
            out[rot(t_out)] += w;  // undo the rotation on the kept pair
        }
    }
    for (double& v : out) v /= pass;
    return {out, pass};
}

// Monte Carlo Pauli-error sampler of a protocol circuit: same circuit
// semantics as the production evaluator, realized by sampling instead of
// enumeration.
struct SampledOutcome {
    double p_succ;
    double p_eff;
    long long passes;
    long long samples;
};

inline SampledOutcome sample_protocol(const bellplan::ProtocolSpec& spec,
                                      double p_raw, double p_local,
                                      long long samples, std::uint64_t seed) {
    using bellplan::ParityBasis;
    using bellplan::PreRotation;
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pauli15(1, 15);

    auto xbit = [](int l) { return l == 1 || l == 2 ? 1 : 0; };
    auto zbit = [](int l) { return l == 2 || l == 3 ? 1 : 0; };
    auto from = [](int x, int z) { return x ? (z ? 2 : 1) : (z ? 3 : 0); };
    auto compose = [&](int a, int b) {
        return from(xbit(a) ^ xbit(b), zbit(a) ^ zbit(b));
    };
    auto draw_raw = [&]() {
        const double u = unit(eng);
        const double each = p_raw / 3.0;
        if (u < 1.0 - p_raw) return 0;
        if (u < 1.0 - p_raw + each) return 1;
        if (u < 1.0 - p_raw + 2 * each) return 2;
        return 3;
    };
    // Two-qubit depolarizing draw: a uniform non-identity Pauli pair with
    // probability p_local, applied to both registers' frames.
    auto depolarize = [&](int& la, int& lb) {
        if (unit(eng) >= p_local) return;
        const int k = pauli15(eng);
        la = compose(la, k / 4);
        lb = compose(lb, k % 4);
    };
    auto meas_flip = [&]() {
        int flip = 0;
        if (unit(eng) < p_local) flip ^= 1;
        if (unit(eng) < p_local) flip ^= 1;
        return flip;
    };
    auto rotate = [&](int l, PreRotation r) {
        if (r != PreRotation::Dejmps) return l;
        return l == 2 ? 3 : (l == 3 ? 2 : l);
    };

    long long passes = 0, bad = 0;
    const int out_reg = spec.steps.back().target;
    std::vector<int> reg(16, -1);  // -1: empty
    for (long long s = 0; s < samples; ++s) {
        std::fill(reg.begin(), reg.end(), -1);
        bool ok = true;
        for (const auto& step : spec.steps) {
            auto load = [&](int r) {
                if (r >= 0 && reg[r] < 0) reg[r] = draw_raw();
            };
            load(step.target);
            load(step.anc1);
            load(step.anc2);
            // Frame bits after the step's optional rotation. Werner-twirl
            // steps need no explicit action here: raw draws are Werner and
            // twirling preserves the I-weight the tallies below use.
            int tx = xbit(rotate(reg[step.target], step.rotation));
            int tz = zbit(rotate(reg[step.target], step.rotation));
            int a1x = xbit(rotate(reg[step.anc1], step.rotation));
            int a1z = zbit(rotate(reg[step.anc1], step.rotation));
            int a2x = step.anc2 >= 0 ? xbit(reg[step.anc2]) : 0;
            int a2z = step.anc2 >= 0 ? zbit(reg[step.anc2]) : 0;
            int parity1 = 0, parity2 = 0;
            if (step.basis == ParityBasis::X) {
                a1x ^= tx;  // CNOT target-pair -> ancilla
                tz ^= a1z;
                {
                    int g1 = from(tx, tz), g2 = from(a1x, a1z);
                    depolarize(g1, g2);
                    depolarize(g1, g2);
                    tx = xbit(g1); tz = zbit(g1); a1x = xbit(g2); a1z = zbit(g2);
                }
                if (step.anc2 >= 0) {
                    a1x ^= a2x;  // CNOT second ancilla -> first
                    a2z ^= a1z;
                    int g1 = from(a2x, a2z), g2 = from(a1x, a1z);
                    depolarize(g1, g2);
                    depolarize(g1, g2);
                    a2x = xbit(g1); a2z = zbit(g1); a1x = xbit(g2); a1z = zbit(g2);
                    parity2 = a2z ^ meas_flip();  // X-basis check of ancilla 2
                }
                parity1 = a1x ^ meas_flip();  // Z-basis check of ancilla 1
            } else {
                tx ^= a1x;  // CNOT ancilla -> target pair
                a1z ^= tz;
                {
                    int g1 = from(a1x, a1z), g2 = from(tx, tz);
                    depolarize(g1, g2);
                    depolarize(g1, g2);
                    a1x = xbit(g1); a1z = zbit(g1); tx = xbit(g2); tz = zbit(g2);
                }
                if (step.anc2 >= 0) {
                    a2x ^= a1x;  // CNOT first ancilla -> second
                    a1z ^= a2z;
                    int g1 = from(a1x, a1z), g2 = from(a2x, a2z);
                    depolarize(g1, g2);
                    depolarize(g1, g2);
                    a1x = xbit(g1); a1z = zbit(g1); a2x = xbit(g2); a2z = zbit(g2);
                    parity2 = a2x ^ meas_flip();  // Z-basis check of ancilla 2
                }
                parity1 = a1z ^ meas_flip();  // X-basis check of ancilla 1
            }
            if (parity1 != 0 || parity2 != 0) {
                ok = false;
                break;
            }
            reg[step.target] = rotate(from(tx, tz), step.rotation);
            reg[step.anc1] = -1;
            if (step.anc2 >= 0) reg[step.anc2] = -1;
        }
        if (!ok) continue;
        ++passes;
        if (reg[out_reg] != 0) ++bad;
    }
    SampledOutcome r{};
    r.samples = samples;
    r.passes = passes;
    r.p_succ = static_cast<double>(passes) / samples;
    r.p_eff = passes > 0 ? static_cast<double>(bad) / passes : 0.0;
    return r;
}

// Mean and unbiased std of a sample.
inline std::pair<double, double> mean_std(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / xs.size();
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, xs.size() > 1 ? std::sqrt(ss / (xs.size() - 1)) : 0.0};
}

}  // namespace oracle
