#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdlib>
#include <optional>
#include <string>
#include <utility>

#include "kbm/errors.hpp"

namespace kbm {

inline long precision_cap_bits() {
    if (const char* s = std::getenv("KBM_PRECISION_CAP_BITS")) {
        long v = std::atol(s);
        if (v >= 64) return v;
    }
    return 1L << 20;
}

// Arbitrary-precision real as midpoint +/- radius. Every operation returns
// a ball containing the exact result of applying the operation to any
// points of the input balls; all radius arithmetic rounds upward.
class BallReal {
    static constexpr mpfr_prec_t kRadPrec = 64;

    mpfr_t mid_;
    mpfr_t rad_;
    mpfr_prec_t prec_;

    // One ulp of mid_ absorbs the rounding of an inexact midpoint op.
    void bump(int ternary) {
        if (ternary == 0) return;
        mpfr_exp_t e;
        if (mpfr_zero_p(mid_) || !mpfr_regular_p(mid_)) {
            e = mpfr_get_emin() + 64;
        } else {
            e = mpfr_get_exp(mid_);
        }
        mpfr_t ulp;
        mpfr_init2(ulp, kRadPrec);
        mpfr_set_ui_2exp(ulp, 1, e - prec_, MPFR_RNDU);
        mpfr_add(rad_, rad_, ulp, MPFR_RNDU);
        mpfr_clear(ulp);
    }

    void endpoints(mpfr_t lo, mpfr_t hi) const {
        // lo/hi must be initialized at prec_ + 64 by the caller.
        mpfr_sub(lo, mid_, rad_, MPFR_RNDD);
        mpfr_add(hi, mid_, rad_, MPFR_RNDU);
    }

    static BallReal from_endpoints(const mpfr_t lo, const mpfr_t hi, mpfr_prec_t prec) {
        BallReal r(prec);
        mpfr_t half;
        mpfr_init2(half, prec + 64);
        int t = mpfr_add(half, lo, hi, MPFR_RNDN);
        mpfr_div_2si(half, half, 1, MPFR_RNDN);
        mpfr_set(r.mid_, half, MPFR_RNDN);
        // rad >= max(hi - mid, mid - lo); hi - lo rounded up covers both
        // halves once we also add an ulp for the midpoint rounding.
        mpfr_t w;
        mpfr_init2(w, kRadPrec);
        mpfr_sub(w, hi, lo, MPFR_RNDU);
        mpfr_div_2si(w, w, 1, MPFR_RNDU);
        mpfr_set(r.rad_, w, MPFR_RNDU);
        r.bump(1);
        (void)t;
        mpfr_clear(half);
        mpfr_clear(w);
        return r;
    }

 public:
    explicit BallReal(mpfr_prec_t prec = 64) : prec_(prec < 2 ? 2 : prec) {
        mpfr_init2(mid_, prec_);
        mpfr_init2(rad_, kRadPrec);
        mpfr_set_zero(mid_, 1);
        mpfr_set_zero(rad_, 1);
    }

    BallReal(const BallReal& o) : prec_(o.prec_) {
        mpfr_init2(mid_, prec_);
        mpfr_init2(rad_, kRadPrec);
        mpfr_set(mid_, o.mid_, MPFR_RNDN);
        mpfr_set(rad_, o.rad_, MPFR_RNDU);
    }

    BallReal(BallReal&& o) noexcept : prec_(o.prec_) {
        mpfr_init2(mid_, 2);
        mpfr_init2(rad_, 2);
        mpfr_swap(mid_, o.mid_);
        mpfr_swap(rad_, o.rad_);
    }

    BallReal& operator=(BallReal o) noexcept {
        mpfr_swap(mid_, o.mid_);
        mpfr_swap(rad_, o.rad_);
        std::swap(prec_, o.prec_);
        return *this;
    }

    ~BallReal() {
        mpfr_clear(mid_);
        mpfr_clear(rad_);
    }

    static BallReal exact_si(long v, mpfr_prec_t prec = 64) {
        BallReal r(prec);
        int t = mpfr_set_si(r.mid_, v, MPFR_RNDN);
        r.bump(t);
        return r;
    }

    static BallReal exact_ui(unsigned long v, mpfr_prec_t prec = 64) {
        BallReal r(prec);
        int t = mpfr_set_ui(r.mid_, v, MPFR_RNDN);
        r.bump(t);
        return r;
    }

    // Exact by construction: precision is widened to hold every bit.
    static BallReal exact_mpz(const mpz_class& v, mpfr_prec_t min_prec = 64) {
        mpfr_prec_t need = static_cast<mpfr_prec_t>(mpz_sizeinbase(v.get_mpz_t(), 2)) + 2;
        BallReal r(need > min_prec ? need : min_prec);
        mpfr_set_z(r.mid_, v.get_mpz_t(), MPFR_RNDN);
        return r;
    }

    static BallReal from_double(double v, mpfr_prec_t prec = 64) {
        BallReal r(prec);
        int t = mpfr_set_d(r.mid_, v, MPFR_RNDN);
        r.bump(t);
        return r;
    }

    // Decimal literal; any representation error goes into the radius.
    static BallReal from_decimal(const std::string& s, mpfr_prec_t prec = 128) {
        BallReal r(prec);
        int t = mpfr_set_str(r.mid_, s.c_str(), 10, MPFR_RNDN);
        if (t == -1) throw DomainError("unparsable decimal literal: " + s);
        r.bump(1);
        return r;
    }

    mpfr_prec_t precision() const { return prec_; }
    bool is_exact() const { return mpfr_zero_p(rad_); }
    bool mid_is_zero() const { return mpfr_zero_p(mid_); }

    BallReal with_precision(mpfr_prec_t prec) const {
        BallReal r(prec);
        int t = mpfr_set(r.mid_, mid_, MPFR_RNDN);
        mpfr_set(r.rad_, rad_, MPFR_RNDU);
        r.bump(t);
        return r;
    }

    // Drops the radius; only for self-correcting midpoint iterations whose
    // result is re-certified afterwards.
    void zero_radius() { mpfr_set_zero(rad_, 1); }

    friend BallReal operator+(const BallReal& a, const BallReal& b) {
        BallReal r(a.prec_ > b.prec_ ? a.prec_ : b.prec_);
        int t = mpfr_add(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
        mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
        r.bump(t);
        return r;
    }

    BallReal operator-() const {
        BallReal r(*this);
        mpfr_neg(r.mid_, r.mid_, MPFR_RNDN);
        return r;
    }

    friend BallReal operator-(const BallReal& a, const BallReal& b) { return a + (-b); }

    friend BallReal operator*(const BallReal& a, const BallReal& b) {
        BallReal r(a.prec_ > b.prec_ ? a.prec_ : b.prec_);
        int t = mpfr_mul(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
        mpfr_t am, bm, term;
        mpfr_init2(am, kRadPrec);
        mpfr_init2(bm, kRadPrec);
        mpfr_init2(term, kRadPrec);
        mpfr_abs(am, a.mid_, MPFR_RNDU);
        mpfr_abs(bm, b.mid_, MPFR_RNDU);
        mpfr_mul(r.rad_, am, b.rad_, MPFR_RNDU);
        mpfr_mul(term, bm, a.rad_, MPFR_RNDU);
        mpfr_add(r.rad_, r.rad_, term, MPFR_RNDU);
        mpfr_mul(term, a.rad_, b.rad_, MPFR_RNDU);
        mpfr_add(r.rad_, r.rad_, term, MPFR_RNDU);
        mpfr_clear(am);
        mpfr_clear(bm);
        mpfr_clear(term);
        r.bump(t);
        return r;
    }

    friend BallReal operator/(const BallReal& a, const BallReal& b) {
        // |a/b - am/bm| <= (ar*|bm| + |am|*br) / (|bm| * (|bm| - br))
        mpfr_t bm_d, bm_u, blo, num, den, term;
        mpfr_init2(bm_d, kRadPrec);
        mpfr_init2(bm_u, kRadPrec);
        mpfr_init2(blo, kRadPrec);
        mpfr_abs(bm_d, b.mid_, MPFR_RNDD);
        mpfr_abs(bm_u, b.mid_, MPFR_RNDU);
        mpfr_sub(blo, bm_d, b.rad_, MPFR_RNDD);
        if (!(mpfr_sgn(blo) > 0)) {
            mpfr_clear(bm_d);
            mpfr_clear(bm_u);
            mpfr_clear(blo);
            throw DomainError("division by a ball containing zero");
        }
        BallReal r(a.prec_ > b.prec_ ? a.prec_ : b.prec_);
        int t = mpfr_div(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
        mpfr_init2(num, kRadPrec);
        mpfr_init2(den, kRadPrec);
        mpfr_init2(term, kRadPrec);
        mpfr_mul(num, a.rad_, bm_u, MPFR_RNDU);
        mpfr_abs(term, a.mid_, MPFR_RNDU);
        mpfr_mul(term, term, b.rad_, MPFR_RNDU);
        mpfr_add(num, num, term, MPFR_RNDU);
        mpfr_mul(den, bm_d, blo, MPFR_RNDD);
        mpfr_div(term, num, den, MPFR_RNDU);
        mpfr_add(r.rad_, r.rad_, term, MPFR_RNDU);
        mpfr_clear(bm_d);
        mpfr_clear(bm_u);
        mpfr_clear(blo);
        mpfr_clear(num);
        mpfr_clear(den);
        mpfr_clear(term);
        r.bump(t);
        return r;
    }

    BallReal inv() const { return exact_ui(1, prec_) / *this; }

    BallReal abs() const {
        mpfr_t lo, hi;
        mpfr_init2(lo, prec_ + 64);
        mpfr_init2(hi, prec_ + 64);
        endpoints(lo, hi);
        BallReal r(prec_);
        if (mpfr_sgn(lo) >= 0) {
            r = *this;
        } else if (mpfr_sgn(hi) <= 0) {
            r = -*this;
        } else {
            // straddles zero: exact |x| lies in [0, max(-lo, hi)]
            mpfr_neg(lo, lo, MPFR_RNDU);
            if (mpfr_cmp(lo, hi) > 0) mpfr_set(hi, lo, MPFR_RNDU);
            mpfr_set_zero(lo, 1);
            r = from_endpoints(lo, hi, prec_);
        }
        mpfr_clear(lo);
        mpfr_clear(hi);
        return r;
    }

    BallReal sqrt() const {
        mpfr_t lo, hi;
        mpfr_init2(lo, prec_ + 64);
        mpfr_init2(hi, prec_ + 64);
        endpoints(lo, hi);
        if (mpfr_sgn(hi) < 0) {
            mpfr_clear(lo);
            mpfr_clear(hi);
            throw DomainError("sqrt of a negative ball");
        }
        if (mpfr_sgn(lo) < 0) mpfr_set_zero(lo, 1);
        mpfr_t slo, shi;
        mpfr_init2(slo, prec_);
        mpfr_init2(shi, prec_);
        mpfr_sqrt(slo, lo, MPFR_RNDD);
        mpfr_sqrt(shi, hi, MPFR_RNDU);
        BallReal r = from_endpoints(slo, shi, prec_);
        mpfr_clear(lo);
        mpfr_clear(hi);
        mpfr_clear(slo);
        mpfr_clear(shi);
        return r;
    }

    BallReal log() const {
        mpfr_t lo, hi;
        mpfr_init2(lo, prec_ + 64);
        mpfr_init2(hi, prec_ + 64);
        endpoints(lo, hi);
        if (mpfr_sgn(lo) <= 0) {
            mpfr_clear(lo);
            mpfr_clear(hi);
            throw DomainError("log of a ball touching zero");
        }
        mpfr_t llo, lhi;
        mpfr_init2(llo, prec_);
        mpfr_init2(lhi, prec_);
        mpfr_log(llo, lo, MPFR_RNDD);
        mpfr_log(lhi, hi, MPFR_RNDU);
        BallReal r = from_endpoints(llo, lhi, prec_);
        mpfr_clear(lo);
        mpfr_clear(hi);
        mpfr_clear(llo);
        mpfr_clear(lhi);
        return r;
    }

    BallReal exp() const {
        mpfr_t lo, hi;
        mpfr_init2(lo, prec_ + 64);
        mpfr_init2(hi, prec_ + 64);
        endpoints(lo, hi);
        mpfr_t elo, ehi;
        mpfr_init2(elo, prec_);
        mpfr_init2(ehi, prec_);
        mpfr_exp(elo, lo, MPFR_RNDD);
        mpfr_exp(ehi, hi, MPFR_RNDU);
        BallReal r = from_endpoints(elo, ehi, prec_);
        mpfr_clear(lo);
        mpfr_clear(hi);
        mpfr_clear(elo);
        mpfr_clear(ehi);
        return r;
    }

    BallReal pow_ui(unsigned long e) const {
        BallReal acc = exact_ui(1, prec_);
        BallReal base = *this;
        while (e > 0) {
            if (e & 1UL) acc = acc * base;
            e >>= 1;
            if (e > 0) base = base * base;
        }
        return acc;
    }

    BallReal mul_2si(long e) const {
        BallReal r(*this);
        mpfr_mul_2si(r.mid_, r.mid_, e, MPFR_RNDN);
        mpfr_mul_2si(r.rad_, r.rad_, e, MPFR_RNDU);
        return r;
    }

    BallReal lower_ball() const {
        BallReal r(prec_ + 64);
        mpfr_sub(r.mid_, mid_, rad_, MPFR_RNDD);
        return r;
    }

    BallReal upper_ball() const {
        BallReal r(prec_ + 64);
        mpfr_add(r.mid_, mid_, rad_, MPFR_RNDU);
        return r;
    }

    double mid_d() const { return mpfr_get_d(mid_, MPFR_RNDN); }
    double rad_d() const { return mpfr_get_d(rad_, MPFR_RNDU); }

    double lower_d() const {
        mpfr_t lo;
        mpfr_init2(lo, prec_ + 64);
        mpfr_sub(lo, mid_, rad_, MPFR_RNDD);
        double v = mpfr_get_d(lo, MPFR_RNDD);
        mpfr_clear(lo);
        return v;
    }

    double upper_d() const {
        mpfr_t hi;
        mpfr_init2(hi, prec_ + 64);
        mpfr_add(hi, mid_, rad_, MPFR_RNDU);
        double v = mpfr_get_d(hi, MPFR_RNDU);
        mpfr_clear(hi);
        return v;
    }

    bool contains_zero() const {
        mpfr_t lo, hi;
        mpfr_init2(lo, prec_ + 64);
        mpfr_init2(hi, prec_ + 64);
        endpoints(lo, hi);
        bool z = mpfr_sgn(lo) <= 0 && mpfr_sgn(hi) >= 0;
        mpfr_clear(lo);
        mpfr_clear(hi);
        return z;
    }

    bool is_positive() const {
        mpfr_t lo;
        mpfr_init2(lo, prec_ + 64);
        mpfr_sub(lo, mid_, rad_, MPFR_RNDD);
        bool p = mpfr_sgn(lo) > 0;
        mpfr_clear(lo);
        return p;
    }

    bool is_negative() const {
        mpfr_t hi;
        mpfr_init2(hi, prec_ + 64);
        mpfr_add(hi, mid_, rad_, MPFR_RNDU);
        bool n = mpfr_sgn(hi) < 0;
        mpfr_clear(hi);
        return n;
    }

    // Certified strict order: true only when the balls are disjoint.
    bool certainly_lt(const BallReal& b) const {
        mpfr_t ua, lb;
        mpfr_init2(ua, prec_ + 64);
        mpfr_init2(lb, b.prec_ + 64);
        mpfr_add(ua, mid_, rad_, MPFR_RNDU);
        mpfr_sub(lb, b.mid_, b.rad_, MPFR_RNDD);
        bool r = mpfr_less_p(ua, lb);
        mpfr_clear(ua);
        mpfr_clear(lb);
        return r;
    }

    bool certainly_le(const BallReal& b) const {
        mpfr_t ua, lb;
        mpfr_init2(ua, prec_ + 64);
        mpfr_init2(lb, b.prec_ + 64);
        mpfr_add(ua, mid_, rad_, MPFR_RNDU);
        mpfr_sub(lb, b.mid_, b.rad_, MPFR_RNDD);
        bool r = mpfr_lessequal_p(ua, lb);
        mpfr_clear(ua);
        mpfr_clear(lb);
        return r;
    }

    // floor is certified only when identical across the whole ball.
    std::optional<mpz_class> floor_certified() const {
        mpfr_t lo, hi;
        mpfr_init2(lo, prec_ + 64);
        mpfr_init2(hi, prec_ + 64);
        endpoints(lo, hi);
        mpz_class flo, fhi;
        mpfr_get_z(flo.get_mpz_t(), lo, MPFR_RNDD);
        mpfr_get_z(fhi.get_mpz_t(), hi, MPFR_RNDD);
        mpfr_clear(lo);
        mpfr_clear(hi);
        if (flo == fhi) return flo;
        return std::nullopt;
    }

    mpz_class round_nearest_mid() const {
        mpz_class n;
        mpfr_get_z(n.get_mpz_t(), mid_, MPFR_RNDN);
        return n;
    }

    // Ball centered at zero whose radius is an upper bound of r.
    static BallReal zero_pm(const BallReal& r) {
        BallReal out(r.prec_);
        mpfr_t hi;
        mpfr_init2(hi, kRadPrec);
        mpfr_abs(hi, r.mid_, MPFR_RNDU);
        mpfr_add(hi, hi, r.rad_, MPFR_RNDU);
        mpfr_set(out.rad_, hi, MPFR_RNDU);
        mpfr_clear(hi);
        return out;
    }

    BallReal pow_si(long e) const {
        if (e >= 0) return pow_ui(static_cast<unsigned long>(e));
        return pow_ui(static_cast<unsigned long>(-e)).inv();
    }

    std::string mid_str(int digits = 25) const {
        char* s = nullptr;
        mpfr_asprintf(&s, "%.*Re", digits, mid_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    std::string rad_str() const {
        char* s = nullptr;
        mpfr_asprintf(&s, "%.6Re", rad_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }
};

inline BallReal ball_log2(mpfr_prec_t prec) { return BallReal::exact_ui(2, prec).log(); }

}  // namespace kbm
