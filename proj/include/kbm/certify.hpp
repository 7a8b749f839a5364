#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "kbm/jsonio.hpp"
#include "kbm/linforms.hpp"
#include "kbm/meet.hpp"
#include "kbm/redux.hpp"

namespace kbm::certify {

struct PerK {
    int k = 0;
    mpz_class M;
    linforms::LargeKWitness contradiction{0, 0.0, 22.0, false};
    std::optional<redux::ReductionCertificate> reduction;
    std::optional<std::string> error;
    double ell_bound = 0.0;
};

struct CertifyReport {
    int k_min = 2;
    int k_max = 2;
    std::vector<PerK> per_k;
    double combined_ell_bound = 0.0;
    double combined_m_bound = 0.0;
    std::optional<meet::SearchConfig> search_performed;
    std::vector<meet::CoincidenceHit> hits;
    bool expected_hits_only = false;
    redux::EndgameDiscrepancy discrepancy;
    std::string verdict;  // "replayed-at-scale" | "bound-only"
};

inline mpz_class default_desk_M_cap() {
    mpz_class cap;
    mpz_ui_pow_ui(cap.get_mpz_t(), 10, 60);
    return cap;
}

// The two known nontrivial coincidences, as the search reports them.
inline std::vector<meet::CoincidenceHit> known_hits_within(const meet::SearchConfig& cfg) {
    std::vector<meet::CoincidenceHit> expected;
    if (cfg.k_min <= 2 && cfg.k_max >= 3 && cfg.value_bound >= 13)
        expected.push_back({mpz_class(13), {{2, 7}, {3, 6}}});
    if (cfg.k_min <= 3 && cfg.k_max >= 7 && cfg.value_bound >= 504)
        expected.push_back({mpz_class(504), {{3, 12}, {7, 11}}});
    return expected;
}

// Scaled-down replay of the proof's case split: per-k reduction
// certificates (desk-scale M), the large-k contradiction witness, the
// combined bounds, and a merge search over the configured region.
inline CertifyReport certify_pipeline(int k_max, long search_bits,
                                      const mpz_class& desk_M_cap = default_desk_M_cap()) {
    if (k_max < 2) throw DomainError("certify: k_max must be >= 2");
    CertifyReport rep;
    rep.k_max = k_max;
    rep.discrepancy = redux::paper_endgame_discrepancy();

    auto run_one = [&desk_M_cap](int k) {
        PerK pk;
        pk.k = k;
        pk.contradiction = linforms::large_k_contradiction(k);
        mpz_class m_paper = linforms::bound_M_of_k_int(k);
        pk.M = std::min(m_paper, desk_M_cap);
        try {
            pk.reduction = redux::reduce_for_k(k, pk.M);
            pk.ell_bound = pk.reduction->ell_bound;
        } catch (const std::exception& e) {
            pk.error = e.what();  // this k is inconclusive, not fatal
        }
        return pk;
    };

    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<PerK>> inflight;
    std::vector<int> pending;
    for (int k = 2; k <= k_max; ++k) pending.push_back(k);
    size_t next = 0;
    while (next < pending.size() || !inflight.empty()) {
        while (next < pending.size() && inflight.size() < workers)
            inflight.push_back(std::async(std::launch::async, run_one, pending[next++]));
        rep.per_k.push_back(inflight.front().get());
        inflight.erase(inflight.begin());
    }

    for (const auto& pk : rep.per_k)
        rep.combined_ell_bound = std::max(rep.combined_ell_bound, pk.ell_bound);
    if (rep.combined_ell_bound >= 3.0)
        rep.combined_m_bound = linforms::bound_m_of_ell(
            static_cast<long>(std::ceil(rep.combined_ell_bound)));

    if (search_bits > 0) {
        meet::SearchConfig cfg;
        cfg.k_min = 2;
        cfg.k_max = k_max;
        mpz_ui_pow_ui(cfg.value_bound.get_mpz_t(), 2, static_cast<unsigned long>(search_bits));
        rep.search_performed = cfg;
        rep.hits = meet::search(cfg);
        rep.expected_hits_only = (rep.hits == known_hits_within(cfg));
        rep.verdict = "replayed-at-scale";
    } else {
        rep.verdict = "bound-only";
    }
    return rep;
}

inline jsonio::ordered_json report_json(const CertifyReport& rep) {
    using jsonio::ordered_json;
    ordered_json per_k = ordered_json::array();
    for (const auto& pk : rep.per_k) {
        ordered_json o{{"k", pk.k},
                       {"M", pk.M.get_str()},
                       {"large_k_contradiction",
                        ordered_json{{"two_pow_half_k", pk.contradiction.two_pow_half_k},
                                     {"threshold", pk.contradiction.threshold},
                                     {"certified", pk.contradiction.contradiction}}}};
        if (pk.reduction) o["reduction"] = jsonio::cert_json(*pk.reduction);
        if (pk.error) o["error"] = *pk.error;
        o["ell_bound"] = pk.ell_bound;
        per_k.push_back(std::move(o));
    }
    ordered_json hits = ordered_json::array();
    for (const auto& h : rep.hits) hits.push_back(jsonio::hit_json(h));
    ordered_json out{{"k_range", ordered_json::array({rep.k_min, rep.k_max})},
                     {"per_k", per_k},
                     {"combined_ell_bound", rep.combined_ell_bound},
                     {"combined_m_bound", rep.combined_m_bound},
                     {"discrepancy", jsonio::discrepancy_json(rep.discrepancy)},
                     {"verdict", rep.verdict}};
    if (rep.search_performed) {
        out["search"] = ordered_json{
            {"k_min", rep.search_performed->k_min},
            {"k_max", rep.search_performed->k_max},
            {"value_bound", rep.search_performed->value_bound.get_str()}};
        out["hits"] = hits;
        out["expected_hits_only"] = rep.expected_hits_only;
    } else {
        out["search"] = nullptr;
    }
    return out;
}

}  // namespace kbm::certify
