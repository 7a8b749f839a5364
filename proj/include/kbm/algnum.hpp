#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <complex>
#include <vector>

#include "kbm/ball.hpp"
#include "kbm/bigseq.hpp"
#include "kbm/errors.hpp"

namespace kbm::algnum {

// psi_k(x) = x^k - x^{k-1} - ... - x - 1, evaluated by Horner on the
// explicit coefficient list (leading 1, then k coefficients of -1).
inline BallReal psi_eval(int k, const BallReal& x) {
    BallReal one = BallReal::exact_si(1, x.precision());
    BallReal r = one;
    for (int i = 0; i < k; ++i) r = r * x - one;
    return r;
}

struct BallComplex {
    BallReal re;
    BallReal im;

    BallComplex(BallReal r, BallReal i) : re(std::move(r)), im(std::move(i)) {}

    static BallComplex real(BallReal r) {
        mpfr_prec_t p = r.precision();
        return BallComplex(std::move(r), BallReal(p));
    }

    BallComplex operator+(const BallComplex& o) const { return {re + o.re, im + o.im}; }
    BallComplex operator-(const BallComplex& o) const { return {re - o.re, im - o.im}; }
    BallComplex operator-() const { return {-re, -im}; }

    BallComplex operator*(const BallComplex& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }

    BallComplex operator/(const BallComplex& o) const {
        BallReal norm = o.re * o.re + o.im * o.im;
        return {(re * o.re + im * o.im) / norm, (im * o.re - re * o.im) / norm};
    }

    BallReal abs() const { return (re * re + im * im).sqrt(); }

    void zero_radius() {
        re.zero_radius();
        im.zero_radius();
    }
};

inline BallComplex psi_eval(int k, const BallComplex& x) {
    BallComplex one = BallComplex::real(BallReal::exact_si(1, x.re.precision()));
    BallComplex r = one;
    for (int i = 0; i < k; ++i) r = r * x - one;
    return r;
}

struct DominantRoot {
    int k;
    BallReal value;
};

// The unique root of psi_k in (2(1 - 2^{-k}), 2), certified by a sign
// change of psi_k across the returned ball.
inline DominantRoot dominant_root(int k, long precision_bits) {
    if (k < 2) throw DomainError("k must be >= 2");
    if (precision_bits < 64) throw DomainError("precision_bits must be >= 64");
    // The root sits within ~2^{-k} of the bracket edge, so the certified
    // ball must be narrower than that regardless of the requested width.
    long pb = std::max(precision_bits, static_cast<long>(k) + 32);

    for (long wp = pb + 64; wp <= precision_cap_bits(); wp *= 2) {
        // Midpoint Newton from x = 2 (psi_k(2) = 1 > 0, decreasing to the root).
        mpfr_t x, f, df, delta;
        mpfr_init2(x, wp);
        mpfr_init2(f, wp);
        mpfr_init2(df, wp);
        mpfr_init2(delta, wp);
        mpfr_set_ui(x, 2, MPFR_RNDN);
        for (int it = 0; it < 200; ++it) {
            mpfr_set_ui(f, 1, MPFR_RNDN);
            mpfr_set_ui(df, 0, MPFR_RNDN);
            for (int i = 0; i < k; ++i) {
                mpfr_mul(df, df, x, MPFR_RNDN);
                mpfr_add(df, df, f, MPFR_RNDN);
                mpfr_mul(f, f, x, MPFR_RNDN);
                mpfr_sub_ui(f, f, 1, MPFR_RNDN);
            }
            mpfr_div(delta, f, df, MPFR_RNDN);
            mpfr_sub(x, x, delta, MPFR_RNDN);
            if (mpfr_zero_p(delta) ||
                mpfr_get_exp(delta) < mpfr_get_exp(x) - (pb + 16)) {
                break;
            }
        }

        // Certified enclosure [x - w, x + w], w = 2^{-(pb-3)}.
        BallReal mid(wp);
        {
            mpfr_t tmp;
            mpfr_init2(tmp, wp + 8);
            mpfr_set(tmp, x, MPFR_RNDN);
            mpz_class scaled;
            mpfr_mul_2si(tmp, tmp, pb + 8, MPFR_RNDN);
            mpfr_get_z(scaled.get_mpz_t(), tmp, MPFR_RNDN);
            mid = BallReal::exact_mpz(scaled, wp).mul_2si(-(pb + 8));
            mpfr_clear(tmp);
        }
        mpfr_clear(x);
        mpfr_clear(f);
        mpfr_clear(df);
        mpfr_clear(delta);

        BallReal w = BallReal::exact_si(1, wp).mul_2si(-(pb - 3));
        BallReal lo_pt = mid - w;
        BallReal hi_pt = mid + w;
        BallReal flo = psi_eval(k, lo_pt);
        BallReal fhi = psi_eval(k, hi_pt);
        if (!(flo.is_negative() && fhi.is_positive())) continue;

        BallReal root = mid + BallReal::zero_pm(w);
        // Containment in the open bracket (2(1 - 2^{-k}), 2).
        BallReal bracket_lo =
            BallReal::exact_si(2, wp) - BallReal::exact_si(1, wp).mul_2si(1 - k);
        if (!(bracket_lo.certainly_lt(root) && root.certainly_lt(BallReal::exact_si(2, wp))))
            continue;
        return DominantRoot{k, root};
    }
    throw PrecisionExhausted("dominant_root: cannot certify at the precision cap");
}

// g(x, y) = (x - 1) / (2 + (y + 1)(x - 2))
inline BallReal weight_g(const BallReal& x, long y) {
    mpfr_prec_t p = x.precision();
    BallReal one = BallReal::exact_si(1, p);
    BallReal two = BallReal::exact_si(2, p);
    BallReal den = two + BallReal::exact_si(y + 1, p) * (x - two);
    if (den.contains_zero()) throw DomainError("weight_g: denominator ball contains zero");
    return (x - one) / den;
}

inline BallComplex weight_g(const BallComplex& x, long y) {
    mpfr_prec_t p = x.re.precision();
    BallComplex one = BallComplex::real(BallReal::exact_si(1, p));
    BallComplex two = BallComplex::real(BallReal::exact_si(2, p));
    BallComplex yp1 = BallComplex::real(BallReal::exact_si(y + 1, p));
    BallComplex den = two + yp1 * (x - two);
    return (x - one) / den;
}

// h(g(alpha,k)) < log(k+1) + log 4  (the closed-form height bound the
// proof consumes, not the exact height).
inline double height_bound_g(int k) {
    if (k < 2) throw DomainError("k must be >= 2");
    return std::log(static_cast<double>(k) + 1.0) + std::log(4.0);
}

// g(alpha,k) * alpha^{n-1}; certified within 1/2 of the exact term.
inline BallReal dresden_estimate(int k, long n, long precision_bits) {
    if (n < 1) throw DomainError("n must be >= 1");
    mpz_class exact = bigseq::term(k, n);
    BallReal half = BallReal::exact_si(1, 64).mul_2si(-1);
    for (long pb = precision_bits; pb <= precision_cap_bits(); pb *= 2) {
        BallReal alpha = dominant_root(k, pb).value;
        BallReal est = weight_g(alpha, k) * alpha.pow_ui(static_cast<unsigned long>(n - 1));
        BallReal err = (est - BallReal::exact_mpz(exact)).abs();
        if (err.certainly_lt(half)) return est;
    }
    throw PrecisionExhausted("dresden_estimate: Dresden error check did not certify");
}

// alpha^{n-2} <= F_n^{(k)} <= alpha^{n-1}, certified by disjoint balls
// (or exact endpoint equality, which happens at n = 1).
inline bool check_growth_bounds(int k, long n, long precision_bits = 96) {
    if (n < 1) throw DomainError("n must be >= 1");
    BallReal f = BallReal::exact_mpz(bigseq::term(k, n));
    for (long pb = precision_bits; pb <= precision_cap_bits(); pb *= 2) {
        BallReal alpha = dominant_root(k, pb).value;
        BallReal lo = alpha.pow_si(n - 2);
        BallReal hi = alpha.pow_si(n - 1);
        bool left_ok = lo.certainly_le(f);
        bool right_ok = f.certainly_le(hi);
        if (left_ok && right_ok) return true;
        // A certified violation is an answer too.
        if (f.certainly_lt(lo) || hi.certainly_lt(f)) return false;
    }
    throw PrecisionExhausted("check_growth_bounds: comparison stayed indeterminate");
}

struct RootSet {
    int k;
    std::vector<BallComplex> roots;
    size_t dominant_index;
};

// All k roots of psi_k as certified, pairwise disjoint complex balls.
// Aberth iteration in doubles, per-root Newton polishing in mpfr, then
// a posteriori Weierstrass-disk certification (each disk of radius
// k*|psi(z_i)/prod(z_i - z_j)| holds exactly one root once disjoint).
inline RootSet all_roots(int k, long precision_bits) {
    if (k < 2 || k > 64) throw DomainError("all_roots supports k in [2, 64]");
    if (precision_bits < 64) throw DomainError("precision_bits must be >= 64");

    auto psi_d = [k](std::complex<double> z) {
        std::complex<double> f(1.0, 0.0);
        for (int i = 0; i < k; ++i) f = f * z - 1.0;
        return f;
    };
    auto dpsi_d = [k](std::complex<double> z) {
        std::complex<double> f(1.0, 0.0), df(0.0, 0.0);
        for (int i = 0; i < k; ++i) {
            df = df * z + f;
            f = f * z - 1.0;
        }
        return df;
    };

    std::vector<std::complex<double>> z(static_cast<size_t>(k));
    constexpr double kTau = 6.283185307179586;
    for (int j = 0; j < k; ++j) {
        double ang = kTau * (j + 0.37) / k;
        z[static_cast<size_t>(j)] = std::polar(1.2, ang);
    }
    for (int it = 0; it < 600; ++it) {
        double worst = 0.0;
        for (int j = 0; j < k; ++j) {
            std::complex<double> w = psi_d(z[j]) / dpsi_d(z[j]);
            std::complex<double> s(0.0, 0.0);
            for (int i = 0; i < k; ++i)
                if (i != j) s += 1.0 / (z[j] - z[i]);
            std::complex<double> corr = w / (1.0 - w * s);
            z[j] -= corr;
            worst = std::max(worst, std::abs(corr));
        }
        if (worst < 1e-14) break;
    }

    for (long wp = std::max(precision_bits, 128L) + 64; wp <= precision_cap_bits(); wp *= 2) {
        std::vector<BallComplex> zs;
        zs.reserve(static_cast<size_t>(k));
        for (int j = 0; j < k; ++j) {
            zs.emplace_back(BallReal::from_double(z[j].real(), wp),
                            BallReal::from_double(z[j].imag(), wp));
        }
        // Newton polishing on midpoints; quadratic from the double seed.
        int polish_iters = 4 + static_cast<int>(std::log2(static_cast<double>(wp)));
        for (int it = 0; it < polish_iters; ++it) {
            for (auto& zj : zs) {
                zj.zero_radius();
                BallComplex one = BallComplex::real(BallReal::exact_si(1, wp));
                BallComplex f = one, df = BallComplex::real(BallReal(wp));
                for (int i = 0; i < k; ++i) {
                    df = df * zj + f;
                    f = f * zj - one;
                }
                zj = zj - f / df;
            }
        }
        for (auto& zj : zs) zj.zero_radius();

        // Weierstrass disks, in ball arithmetic.
        std::vector<BallReal> radius;
        radius.reserve(static_cast<size_t>(k));
        bool cert_failed = false;
        for (int j = 0; j < k && !cert_failed; ++j) {
            BallComplex num = psi_eval(k, zs[static_cast<size_t>(j)]);
            BallComplex den = BallComplex::real(BallReal::exact_si(1, wp));
            for (int i = 0; i < k; ++i)
                if (i != j) den = den * (zs[static_cast<size_t>(j)] - zs[static_cast<size_t>(i)]);
            BallReal dabs = den.abs();
            if (!dabs.is_positive()) {
                cert_failed = true;
                break;
            }
            radius.push_back((num.abs() / dabs) * BallReal::exact_si(k, wp));
        }
        if (cert_failed) continue;

        for (int i = 0; i < k && !cert_failed; ++i)
            for (int j = i + 1; j < k && !cert_failed; ++j) {
                BallReal dist = (zs[static_cast<size_t>(i)] - zs[static_cast<size_t>(j)]).abs();
                if (!(radius[static_cast<size_t>(i)] + radius[static_cast<size_t>(j)])
                         .certainly_lt(dist))
                    cert_failed = true;
            }
        if (cert_failed) continue;

        RootSet rs{k, {}, 0};
        size_t n_outside = 0;
        BallReal one = BallReal::exact_si(1, wp);
        for (int j = 0; j < k; ++j) {
            BallReal pm = BallReal::zero_pm(radius[static_cast<size_t>(j)]);
            BallComplex enclosed(zs[static_cast<size_t>(j)].re + pm,
                                 zs[static_cast<size_t>(j)].im + pm);
            BallReal mod = enclosed.abs();
            if (one.certainly_lt(mod)) {
                rs.dominant_index = rs.roots.size();
                ++n_outside;
            } else if (!mod.certainly_lt(one)) {
                cert_failed = true;
            }
            rs.roots.push_back(std::move(enclosed));
        }
        if (cert_failed || n_outside != 1) continue;
        return rs;
    }
    throw PrecisionExhausted("all_roots: cannot certify disjoint root disks");
}

}  // namespace kbm::algnum
