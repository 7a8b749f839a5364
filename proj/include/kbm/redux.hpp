#pragma once

#include <gmpxx.h>

#include <optional>
#include <utility>
#include <vector>

#include "kbm/algnum.hpp"
#include "kbm/ball.hpp"
#include "kbm/errors.hpp"
#include "kbm/linforms.hpp"

namespace kbm::redux {

// gamma_k = log alpha_k / log 2,  mu_k = log g(alpha_k, k) / log 2
inline std::pair<BallReal, BallReal> gamma_mu(int k, long precision_bits) {
    if (k < 2) throw DomainError("gamma_mu: k must be >= 2");
    BallReal alpha = algnum::dominant_root(k, precision_bits + 32).value;
    BallReal l2 = ball_log2(static_cast<mpfr_prec_t>(precision_bits + 32));
    BallReal gamma = alpha.log() / l2;
    BallReal mu = algnum::weight_g(alpha, k).log() / l2;
    return {std::move(gamma), std::move(mu)};
}

// Incremental certified continued-fraction expansion: a quotient is
// emitted only when the floor is identical across the whole ball.
class CFExpander {
    BallReal cur_;
    mpz_class p1_{1}, p2_{0};  // p_{i-1}, p_{i-2}
    mpz_class q1_{0}, q2_{1};
    bool terminated_ = false;
    bool have_cur_ = true;
    BallReal pending_frac_;

 public:
    struct Step {
        mpz_class a;
        mpz_class p;
        mpz_class q;
    };

    explicit CFExpander(BallReal x) : cur_(std::move(x)), pending_frac_(2) {}

    bool terminated() const { return terminated_; }

    std::optional<Step> next() {
        if (terminated_) return std::nullopt;
        if (!have_cur_) {
            // invert the previous fractional part lazily, so a rational
            // tail can signal termination instead of dividing by zero
            try {
                cur_ = pending_frac_.inv();
            } catch (const DomainError&) {
                throw PrecisionExhausted("cf: fractional part not separable from zero");
            }
            have_cur_ = true;
        }
        auto fl = cur_.floor_certified();
        if (!fl) throw PrecisionExhausted("cf: partial quotient not certified");
        Step s;
        s.a = *fl;
        s.p = s.a * p1_ + p2_;
        s.q = s.a * q1_ + q2_;
        p2_ = p1_;
        p1_ = s.p;
        q2_ = q1_;
        q1_ = s.q;
        BallReal frac = cur_ - BallReal::exact_mpz(s.a, cur_.precision());
        if (frac.is_exact() && frac.mid_is_zero()) {
            terminated_ = true;
        } else {
            pending_frac_ = std::move(frac);
            have_cur_ = false;
        }
        return s;
    }
};

struct ContinuedFraction {
    BallReal x;
    std::vector<mpz_class> quotients;                           // a_0 .. a_N
    std::vector<std::pair<mpz_class, mpz_class>> convergents;   // (p_i, q_i)
    bool terminated = false;
};

// Expands through the convergent of index `count` (so count+1 quotients
// a_0..a_count), or fewer if the value turns out rational.
inline ContinuedFraction expand_cf(const BallReal& x, long count) {
    if (count < 1) throw DomainError("expand_cf: count must be >= 1");
    ContinuedFraction cf{x, {}, {}, false};
    CFExpander ex(x);
    for (long i = 0; i <= count; ++i) {
        auto s = ex.next();
        if (!s) break;
        cf.quotients.push_back(s->a);
        cf.convergents.emplace_back(s->p, s->q);
    }
    cf.terminated = ex.terminated();
    return cf;
}

// || x || = min_{n in Z} |x - n|, as a ball in [0, 1/2].
inline BallReal nearest_int_distance(const BallReal& x) {
    mpz_class n0 = x.round_nearest_mid();
    BallReal d = (x - BallReal::exact_mpz(n0, x.precision())).abs();
    BallReal half = BallReal::exact_si(1, 64).mul_2si(-1);
    if (d.certainly_le(half)) return d;
    // Ball too wide to know the nearest integer; fall back to the full
    // codomain so callers escalate precision instead of trusting junk.
    return BallReal::exact_si(1, 64).mul_2si(-2) + BallReal::zero_pm(half.mul_2si(-1));
}

struct ReductionCertificate {
    long k = 0;  // 0 for raw dp_reduce calls with synthetic gamma/mu
    mpz_class M;
    BallReal gamma{2};
    BallReal mu{2};
    mpz_class q;
    long q_index = -1;
    BallReal epsilon{2};
    double A = 0.0;
    double B = 0.0;
    double ell_bound = 0.0;
};

namespace detail {

inline ReductionCertificate dp_reduce_core(const BallReal& gamma, const BallReal& mu,
                                           const mpz_class& M, const BallReal& A_ball,
                                           const BallReal& log_B, double A_rec, double B_rec,
                                           long max_convergents) {
    if (M < 1) throw DomainError("dp_reduce: M must be >= 1");
    if (!A_ball.is_positive()) throw DomainError("dp_reduce: A must be > 0");
    if (!log_B.is_positive()) throw DomainError("dp_reduce: B must be > 1");

    mpz_class six_m = 6 * M;
    BallReal m_ball = BallReal::exact_mpz(M);
    CFExpander ex(gamma);
    bool saw_ambiguous = false;
    for (long idx = 0; idx <= max_convergents; ++idx) {
        auto s = ex.next();
        if (!s) throw NoPositiveEpsilon("dp_reduce: expansion terminated (rational gamma?)");
        if (s->q <= six_m) continue;
        BallReal qb = BallReal::exact_mpz(s->q, gamma.precision());
        BallReal eps =
            nearest_int_distance(mu * qb) - m_ball * nearest_int_distance(gamma * qb);
        if (eps.is_positive()) {
            ReductionCertificate cert;
            cert.M = M;
            cert.gamma = gamma;
            cert.mu = mu;
            cert.q = s->q;
            cert.q_index = idx;
            cert.epsilon = eps;
            cert.A = A_rec;
            cert.B = B_rec;
            // outward: upper of log(A q / eps_lower) over lower of log B
            BallReal eps_lo = eps.lower_ball();
            BallReal num = (A_ball * qb / eps_lo).log();
            cert.ell_bound = (num / log_B).upper_d();
            return cert;
        }
        // eps certified nonpositive or still ambiguous: the next convergent
        // is an equally valid candidate either way.
        if (!eps.is_negative()) saw_ambiguous = true;
    }
    if (saw_ambiguous)
        throw PrecisionExhausted("dp_reduce: epsilon sign stayed ambiguous at this precision");
    throw NoPositiveEpsilon("dp_reduce: no certified epsilon > 0 within convergent budget");
}

}  // namespace detail

inline ReductionCertificate dp_reduce(const BallReal& gamma, const BallReal& mu,
                                      const mpz_class& M, double A, double B,
                                      long max_convergents) {
    mpfr_prec_t prec = gamma.precision();
    BallReal A_ball = BallReal::from_double(A, prec);
    BallReal log_B = BallReal::from_double(B, prec).log();
    return detail::dp_reduce_core(gamma, mu, M, A_ball, log_B, A, B, max_convergents);
}

// The per-k reduction of the proof's small-k case: A = 7.3, B = sqrt(2)
// (kept symbolic: log B = (log 2)/2, so no rounding compounds into it).
inline ReductionCertificate reduce_for_k(int k, const mpz_class& M) {
    if (k < 2) throw DomainError("reduce_for_k: k must be >= 2");
    if (M < 1) throw DomainError("reduce_for_k: M must be >= 1");
    mpz_class six_m = 6 * M;
    long qbits = static_cast<long>(mpz_sizeinbase(six_m.get_mpz_t(), 2));
    long start = std::max(256L, 2 * qbits + 64);
    long max_conv = 4 * qbits + 200;
    for (long prec = start; prec <= precision_cap_bits(); prec *= 2) {
        auto [gamma, mu] = gamma_mu(k, prec);
        BallReal A_ball = BallReal::exact_si(73, prec) / BallReal::exact_si(10, prec);
        BallReal log_B = ball_log2(static_cast<mpfr_prec_t>(prec)).mul_2si(-1);
        try {
            ReductionCertificate cert = detail::dp_reduce_core(
                gamma, mu, M, A_ball, log_B, 7.3, 1.4142135623730951, max_conv);
            cert.k = k;
            return cert;
        } catch (const PrecisionExhausted&) {
            // escalate gamma/mu precision and rescan
        }
    }
    throw PrecisionExhausted("reduce_for_k: precision cap reached");
}

// Section 4.2's closing number, recomputed from the paper's own quoted
// inputs. Dividing by log 2 reproduces the printed 3757.06...; dividing by
// log sqrt(2) (the stated B) gives twice that. Certificates must carry the
// conservative (larger) figure.
struct EndgameDiscrepancy {
    double A = 7.3;
    double q_exponent10 = 1125;  // q = 2 * 10^1125
    double eps = 1.5e-5;
    double log2_variant;
    double log_sqrt2_variant;
    double conservative;
};

inline EndgameDiscrepancy paper_endgame_discrepancy() {
    const mpfr_prec_t prec = 256;
    mpz_class q;
    mpz_ui_pow_ui(q.get_mpz_t(), 10, 1125);
    q *= 2;
    BallReal A = BallReal::exact_si(73, prec) / BallReal::exact_si(10, prec);
    BallReal eps = BallReal::exact_si(15, prec) / linforms::ball_e10(1, 6, prec);
    BallReal val = (A * BallReal::exact_mpz(q, prec) / eps).log();
    BallReal l2 = ball_log2(prec);
    EndgameDiscrepancy d;
    d.log2_variant = (val / l2).mid_d();
    d.log_sqrt2_variant = (val / l2.mul_2si(-1)).mid_d();
    d.conservative = d.log_sqrt2_variant;
    return d;
}

}  // namespace kbm::redux
