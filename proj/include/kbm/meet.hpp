#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kbm/bigseq.hpp"
#include "kbm/errors.hpp"

namespace kbm::meet {

inline unsigned long long memory_cap_bytes() {
    if (const char* s = std::getenv("KBM_MEMORY_CAP_BYTES")) {
        unsigned long long v = std::strtoull(s, nullptr, 10);
        if (v > 0) return v;
    }
    return 4ULL << 30;
}

struct SearchConfig {
    int k_min = 2;
    int k_max = 2;
    mpz_class value_bound;
    long checkpoint_every = 0;

    void validate() const {
        if (k_min < 2 || k_min > k_max) throw DomainError("need 2 <= k_min <= k_max");
        if (value_bound < 3) throw DomainError("value_bound must be >= 3");
    }
};

struct Attainer {
    int k;
    long n;
    bool operator==(const Attainer&) const = default;
};

struct CoincidenceHit {
    mpz_class value;
    std::vector<Attainer> attainers;
    bool operator==(const CoincidenceHit&) const = default;
};

namespace detail {

inline void put_u32(std::vector<uint8_t>& b, uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline void put_u64(std::vector<uint8_t>& b, uint64_t v) {
    for (int i = 0; i < 8; ++i) b.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline void put_mpz(std::vector<uint8_t>& b, const mpz_class& v) {
    size_t count = 0;
    std::vector<uint8_t> raw((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8 + 1);
    mpz_export(raw.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
    put_u32(b, static_cast<uint32_t>(count));
    b.insert(b.end(), raw.begin(), raw.begin() + static_cast<long>(count));
}

struct Reader {
    const std::vector<uint8_t>& b;
    size_t pos = 0;

    void need(size_t n) const {
        if (pos + n > b.size()) throw CorruptCheckpoint("checkpoint truncated");
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[pos++]) << (8 * i);
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[pos++]) << (8 * i);
        return v;
    }
    mpz_class z() {
        uint32_t n = u32();
        need(n);
        mpz_class v;
        if (n > 0) mpz_import(v.get_mpz_t(), n, 1, 1, 1, 0, b.data() + pos);
        pos += n;
        return v;
    }
};

inline uint64_t fnv1a64(const uint8_t* data, size_t n) {
    uint64_t h = 1469598103934665603ULL;
    for (size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 1099511628211ULL;
    }
    return h;
}

constexpr char kMagic[9] = "KBMCKPT1";

}  // namespace detail

// Min-ordered merge over the frontiers of F^(k_min)..F^(k_max). Each
// sequence starts at frontier index k+2 (value 2^k - 1, past the shared
// power-of-two prefix) and is retired once its frontier exceeds the bound.
class MergeSearch {
    SearchConfig cfg_;
    std::vector<bigseq::SequenceWindow> streams_;
    std::vector<bool> active_;
    std::map<mpz_class, std::vector<int>> frontier_;  // value -> stream ids
    std::vector<CoincidenceHit> hits_;
    mpz_class last_popped_{-1};
    uint64_t pops_ = 0;

    MergeSearch() = default;

    void check_memory() const {
        unsigned long long bytes_per_term =
            mpz_sizeinbase(cfg_.value_bound.get_mpz_t(), 2) / 8 + 48;
        unsigned long long total = 0;
        for (int k = cfg_.k_min; k <= cfg_.k_max; ++k)
            total += static_cast<unsigned long long>(k + 2) * bytes_per_term;
        if (total > memory_cap_bytes())
            throw ResourceLimit("projected window memory " + std::to_string(total) +
                                " bytes exceeds cap");
    }

    void enqueue(int id) {
        const auto& w = streams_[static_cast<size_t>(id)];
        if (w.frontier_value() > cfg_.value_bound) {
            active_[static_cast<size_t>(id)] = false;
            return;
        }
        frontier_[w.frontier_value()].push_back(id);
    }

 public:
    explicit MergeSearch(const SearchConfig& cfg) : cfg_(cfg) {
        cfg_.validate();
        check_memory();
        for (int k = cfg_.k_min; k <= cfg_.k_max; ++k) {
            streams_.push_back(bigseq::window_at(k, k + 2));
            active_.push_back(true);
            enqueue(static_cast<int>(streams_.size()) - 1);
        }
    }

    const SearchConfig& config() const { return cfg_; }
    const std::vector<CoincidenceHit>& hits() const { return hits_; }
    uint64_t pops() const { return pops_; }
    bool done() const { return frontier_.empty(); }

    // Pops one value group; false once every stream is retired.
    bool step() {
        if (frontier_.empty()) return false;
        auto it = frontier_.begin();
        const mpz_class v = it->first;
        std::vector<int> ids = std::move(it->second);
        frontier_.erase(it);
        if (pops_ > 0 && v < last_popped_)
            throw std::logic_error("merge order violated: frontier streams not monotone");
        last_popped_ = v;
        ++pops_;

        if (ids.size() >= 2) {
            CoincidenceHit hit;
            hit.value = v;
            for (int id : ids) {
                const auto& w = streams_[static_cast<size_t>(id)];
                hit.attainers.push_back(Attainer{w.k(), w.frontier()});
            }
            std::sort(hit.attainers.begin(), hit.attainers.end(),
                      [](const Attainer& a, const Attainer& b) { return a.k < b.k; });
            hits_.push_back(std::move(hit));
        }
        for (int id : ids) {
            streams_[static_cast<size_t>(id)].advance();
            enqueue(id);
        }
        return true;
    }

    void run(const std::function<void(const MergeSearch&)>& on_checkpoint = nullptr) {
        while (step()) {
            if (on_checkpoint && cfg_.checkpoint_every > 0 &&
                pops_ % static_cast<uint64_t>(cfg_.checkpoint_every) == 0)
                on_checkpoint(*this);
        }
    }

    // Versioned binary blob with a trailing integrity hash.
    std::vector<uint8_t> checkpoint() const {
        using namespace detail;
        std::vector<uint8_t> b;
        b.insert(b.end(), kMagic, kMagic + 8);
        put_u32(b, 1);  // version
        put_u32(b, static_cast<uint32_t>(cfg_.k_min));
        put_u32(b, static_cast<uint32_t>(cfg_.k_max));
        put_mpz(b, cfg_.value_bound);
        put_u64(b, static_cast<uint64_t>(cfg_.checkpoint_every));
        put_u64(b, pops_);
        put_u32(b, last_popped_ >= 0 ? 1u : 0u);
        if (last_popped_ >= 0) put_mpz(b, last_popped_);
        put_u32(b, static_cast<uint32_t>(streams_.size()));
        for (size_t i = 0; i < streams_.size(); ++i) {
            put_u32(b, active_[i] ? 1u : 0u);
            put_u64(b, static_cast<uint64_t>(streams_[i].frontier()));
            for (const auto& t : streams_[i].window()) put_mpz(b, t);
        }
        put_u32(b, static_cast<uint32_t>(hits_.size()));
        for (const auto& h : hits_) {
            put_mpz(b, h.value);
            put_u32(b, static_cast<uint32_t>(h.attainers.size()));
            for (const auto& a : h.attainers) {
                put_u32(b, static_cast<uint32_t>(a.k));
                put_u64(b, static_cast<uint64_t>(a.n));
            }
        }
        put_u64(b, fnv1a64(b.data(), b.size()));
        return b;
    }

    static MergeSearch restore(const std::vector<uint8_t>& blob) {
        using namespace detail;
        if (blob.size() < 20 || std::memcmp(blob.data(), kMagic, 8) != 0)
            throw CorruptCheckpoint("bad checkpoint magic");
        uint64_t stored = 0;
        for (int i = 0; i < 8; ++i)
            stored |= static_cast<uint64_t>(blob[blob.size() - 8 + static_cast<size_t>(i)])
                      << (8 * i);
        if (fnv1a64(blob.data(), blob.size() - 8) != stored)
            throw CorruptCheckpoint("checkpoint integrity hash mismatch");

        Reader r{blob, 8};
        if (r.u32() != 1) throw CorruptCheckpoint("unsupported checkpoint version");
        MergeSearch ms;
        ms.cfg_.k_min = static_cast<int>(r.u32());
        ms.cfg_.k_max = static_cast<int>(r.u32());
        ms.cfg_.value_bound = r.z();
        ms.cfg_.checkpoint_every = static_cast<long>(r.u64());
        ms.cfg_.validate();
        ms.pops_ = r.u64();
        if (r.u32()) ms.last_popped_ = r.z();
        uint32_t n_streams = r.u32();
        if (n_streams != static_cast<uint32_t>(ms.cfg_.k_max - ms.cfg_.k_min + 1))
            throw CorruptCheckpoint("stream count mismatch");
        for (uint32_t i = 0; i < n_streams; ++i) {
            int k = ms.cfg_.k_min + static_cast<int>(i);
            bool act = r.u32() != 0;
            long frontier = static_cast<long>(r.u64());
            std::deque<mpz_class> w;
            for (int j = 0; j < k; ++j) w.push_back(r.z());
            ms.streams_.push_back(bigseq::SequenceWindow::raw(k, std::move(w), frontier));
            ms.active_.push_back(act);
            if (act) ms.frontier_[ms.streams_.back().frontier_value()].push_back(
                static_cast<int>(i));
        }
        uint32_t n_hits = r.u32();
        for (uint32_t i = 0; i < n_hits; ++i) {
            CoincidenceHit h;
            h.value = r.z();
            uint32_t na = r.u32();
            for (uint32_t j = 0; j < na; ++j) {
                Attainer a{static_cast<int>(r.u32()), 0};
                a.n = static_cast<long>(r.u64());
                h.attainers.push_back(a);
            }
            ms.hits_.push_back(std::move(h));
        }
        return ms;
    }
};

inline std::vector<CoincidenceHit> search(const SearchConfig& cfg) {
    MergeSearch ms(cfg);
    ms.run();
    return ms.hits();
}

// Independent oracle: generate every in-range term per sequence and join
// by exact value. Deliberately shares nothing with the merge loop beyond
// the window generator.
inline std::vector<CoincidenceHit> brute_force_oracle(const SearchConfig& cfg) {
    cfg.validate();
    mpz_class scale_cap;
    mpz_ui_pow_ui(scale_cap.get_mpz_t(), 2, 64);
    if (cfg.k_max > 16 || cfg.value_bound > scale_cap)
        throw DomainError("brute_force_oracle: oracle scale exceeded (k_max <= 16, bound <= 2^64)");
    std::map<mpz_class, std::vector<Attainer>> table;
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
        auto w = bigseq::window_at(k, k + 2);
        while (w.frontier_value() <= cfg.value_bound) {
            table[w.frontier_value()].push_back(Attainer{k, w.frontier()});
            w.advance();
        }
    }
    std::vector<CoincidenceHit> hits;
    for (auto& [v, att] : table)
        if (att.size() >= 2) hits.push_back(CoincidenceHit{v, att});
    return hits;
}

inline std::vector<uint8_t> checkpoint_save(const MergeSearch& ms) { return ms.checkpoint(); }
inline MergeSearch checkpoint_load(const std::vector<uint8_t>& blob) {
    return MergeSearch::restore(blob);
}

}  // namespace kbm::meet
