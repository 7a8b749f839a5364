#include <catch_amalgamated.hpp>

#include <cmath>

#include "kbm/algnum.hpp"

using kbm::BallReal;
using namespace kbm::algnum;

namespace {

bool contains_point(const BallReal& r, const BallReal& e) {
    return !r.certainly_lt(e) && !e.certainly_lt(r);
}

}  // namespace

TEST_CASE("dominant root of psi_2 is the golden ratio", "[algnum]") {
    auto r = dominant_root(2, 192);
    BallReal phi = (BallReal::exact_si(1, 512) + BallReal::exact_si(5, 512).sqrt())
                       .mul_2si(-1);
    REQUIRE((!r.value.certainly_lt(phi) && !phi.certainly_lt(r.value)));
    REQUIRE(std::abs(r.value.mid_d() - 1.6180339887498949) < 1e-15);
}

TEST_CASE("dominant root of psi_3 (tribonacci constant)", "[algnum]") {
    auto r = dominant_root(3, 128);
    REQUIRE(std::abs(r.value.mid_d() - 1.8392867552141612) < 1e-15);
    REQUIRE(contains_point(psi_eval(3, r.value), BallReal::exact_si(0)) );
}

TEST_CASE("psi vanishes on the certified root ball", "[algnum]") {
    for (int k : {2, 3, 5, 11, 24}) {
        auto r = dominant_root(k, 160);
        REQUIRE(psi_eval(k, r.value).contains_zero());
    }
}

TEST_CASE("root bracket and monotonicity in k", "[algnum][property]") {
    BallReal prev(64);
    for (int k = 2; k <= 100; ++k) {
        auto r = dominant_root(k, 96);
        BallReal lo = BallReal::exact_si(2, 256) - BallReal::exact_si(1, 256).mul_2si(1 - k);
        REQUIRE(lo.certainly_lt(r.value));
        REQUIRE(r.value.certainly_lt(BallReal::exact_si(2)));
        if (k > 2) REQUIRE(prev.certainly_lt(r.value));
        prev = r.value;
    }
}

TEST_CASE("dominant_root input validation", "[algnum]") {
    REQUIRE_THROWS_AS(dominant_root(1, 128), kbm::DomainError);
    REQUIRE_THROWS_AS(dominant_root(4, 32), kbm::DomainError);
}

TEST_CASE("weight g values", "[algnum]") {
    // g(2, y) = 1/2 for any y
    for (long y : {2L, 5L, 60L})
        REQUIRE(contains_point(weight_g(BallReal::exact_si(2, 128), y),
                               BallReal::exact_si(1, 64).mul_2si(-1)));
    // g(alpha_k, k) lies in (1/4, 1) on the dominant root
    BallReal quarter = BallReal::exact_si(1, 64).mul_2si(-2);
    BallReal one = BallReal::exact_si(1);
    for (int k = 2; k <= 40; ++k) {
        BallReal g = weight_g(dominant_root(k, 128).value, k);
        REQUIRE(quarter.certainly_lt(g));
        REQUIRE(g.certainly_lt(one));
    }
    // denominator pinched to zero is a domain error
    BallReal bad = BallReal::exact_si(2, 128) -
                   (BallReal::exact_si(2, 128) / BallReal::exact_si(3, 128));
    REQUIRE_THROWS_AS(weight_g(bad, 2), kbm::DomainError);
}

TEST_CASE("height bound for g", "[algnum]") {
    REQUIRE(height_bound_g(2) == Catch::Approx(std::log(12.0)));
    REQUIRE(height_bound_g(10) == Catch::Approx(std::log(44.0)));
    REQUIRE_THROWS_AS(height_bound_g(1), kbm::DomainError);
}

TEST_CASE("Dresden estimate lands within 1/2 of the exact term", "[algnum]") {
    BallReal half = BallReal::exact_si(1, 64).mul_2si(-1);
    for (int k : {2, 3, 7, 12}) {
        for (long n : {1L, 5L, 20L, 60L}) {
            BallReal est = dresden_estimate(k, n, 256);
            BallReal err = (est - BallReal::exact_mpz(kbm::bigseq::term(k, n))).abs();
            REQUIRE(err.certainly_lt(half));
            REQUIRE(est.round_nearest_mid() == kbm::bigseq::term(k, n));
        }
    }
}

TEST_CASE("growth sandwich on a light grid", "[algnum]") {
    for (int k : {2, 3, 6, 13}) {
        for (long n : {1L, 2L, 10L, 40L, 90L}) {
            REQUIRE(check_growth_bounds(k, n));
        }
    }
}

TEST_CASE("all_roots for k=2 finds both golden-ratio conjugates", "[algnum]") {
    auto rs = all_roots(2, 128);
    REQUIRE(rs.roots.size() == 2);
    BallReal sqrt5 = BallReal::exact_si(5, 512).sqrt();
    BallReal phi = (BallReal::exact_si(1, 512) + sqrt5).mul_2si(-1);
    BallReal psi = (BallReal::exact_si(1, 512) - sqrt5).mul_2si(-1);
    const auto& dom = rs.roots[rs.dominant_index];
    const auto& other = rs.roots[1 - rs.dominant_index];
    REQUIRE((!dom.re.certainly_lt(phi) && !phi.certainly_lt(dom.re)));
    REQUIRE(dom.im.contains_zero());
    REQUIRE((!other.re.certainly_lt(psi) && !psi.certainly_lt(other.re)));
}

TEST_CASE("all_roots structure: trace, norm, single dominant", "[algnum][property]") {
    for (int k = 2; k <= 64; k += (k < 12 ? 1 : 13)) {
        auto rs = all_roots(k, 128);
        REQUIRE(rs.roots.size() == static_cast<size_t>(k));
        mpfr_prec_t p = rs.roots[0].re.precision();
        // sum of roots = 1, product = (-1)^{k-1} (from psi's coefficients)
        BallComplex sum = BallComplex::real(BallReal(p));
        BallComplex prod = BallComplex::real(BallReal::exact_si(1, p));
        size_t outside = 0;
        BallReal one = BallReal::exact_si(1);
        for (const auto& z : rs.roots) {
            sum = sum + z;
            prod = prod * z;
            if (one.certainly_lt(z.abs())) ++outside;
        }
        REQUIRE(outside == 1);
        REQUIRE(contains_point(sum.re, BallReal::exact_si(1)));
        REQUIRE(sum.im.contains_zero());
        REQUIRE(contains_point(prod.re, BallReal::exact_si(k % 2 == 0 ? -1 : 1)));
        REQUIRE(prod.im.contains_zero());
    }
    REQUIRE_THROWS_AS(all_roots(65, 128), kbm::DomainError);
}

TEST_CASE("conjugate weights are small", "[algnum][property]") {
    BallReal two = BallReal::exact_si(2);
    for (int k = 2; k <= 64; k += 7) {
        auto rs = all_roots(k, 128);
        for (size_t i = 0; i < rs.roots.size(); ++i) {
            auto g = weight_g(rs.roots[i], k);
            REQUIRE(g.abs().certainly_lt(two));
        }
    }
}

TEST_CASE("Binet reconstruction matches exact terms", "[algnum][property]") {
    for (int k = 2; k <= 8; ++k) {
        auto rs = all_roots(k, 256);
        mpfr_prec_t p = rs.roots[0].re.precision();
        std::vector<BallComplex> weights;
        for (const auto& z : rs.roots) weights.push_back(weight_g(z, k));
        BallReal tol = BallReal::from_decimal("1e-10", 96);
        for (long n = 1; n <= 60; ++n) {
            BallComplex acc = BallComplex::real(BallReal(p));
            for (size_t i = 0; i < rs.roots.size(); ++i) {
                BallComplex pw = BallComplex::real(BallReal::exact_si(1, p));
                for (long e = 0; e < n - 1; ++e) pw = pw * rs.roots[i];
                acc = acc + weights[i] * pw;
            }
            BallReal diff =
                (acc.re - BallReal::exact_mpz(kbm::bigseq::term(k, n))).abs();
            REQUIRE(diff.certainly_lt(tol));
            REQUIRE(acc.im.abs().certainly_lt(tol));
        }
    }
}
