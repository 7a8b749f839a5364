#pragma once

#include <gmpxx.h>

#include <deque>
#include <string>
#include <utility>

#include "kbm/errors.hpp"

namespace kbm::bigseq {

// Index into F^(k); the sequence is defined from n = -(k-2) onwards.
struct TermIndex {
    int k;
    long n;

    TermIndex(int k_, long n_) : k(k_), n(n_) {
        if (k < 2) throw DomainError("k must be >= 2");
        if (n < -(static_cast<long>(k) - 2))
            throw DomainError("index below first defined term of F^(" + std::to_string(k) + ")");
    }
};

// Sliding window of the last k terms, with the running sum maintained so
// that each advance costs one big-int addition and one subtraction.
class SequenceWindow {
    int k_;
    std::deque<mpz_class> window_;  // F_{frontier-k+1} .. F_{frontier}
    mpz_class running_sum_;
    long frontier_;

    SequenceWindow(int k, std::deque<mpz_class> w, mpz_class sum, long frontier)
        : k_(k), window_(std::move(w)), running_sum_(std::move(sum)), frontier_(frontier) {}

 public:
    // Window whose frontier is the initial seed term F_1 = 1; the k-1
    // entries before it are the initial zeros.
    static SequenceWindow seed(int k) {
        if (k < 2) throw DomainError("k must be >= 2");
        std::deque<mpz_class> w(static_cast<size_t>(k), mpz_class(0));
        w.back() = 1;
        return SequenceWindow(k, std::move(w), mpz_class(1), 1);
    }

    static SequenceWindow raw(int k, std::deque<mpz_class> w, long frontier) {
        if (k < 2 || w.size() != static_cast<size_t>(k)) throw DomainError("bad window");
        mpz_class sum = 0;
        for (const auto& t : w) sum += t;
        return SequenceWindow(k, std::move(w), std::move(sum), frontier);
    }

    int k() const { return k_; }
    long frontier() const { return frontier_; }
    const mpz_class& frontier_value() const { return window_.back(); }
    const mpz_class& running_sum() const { return running_sum_; }
    const std::deque<mpz_class>& window() const { return window_; }

    // Shifts by one: the new term is the current running sum.
    const mpz_class& advance() {
        mpz_class next = running_sum_;
        running_sum_ += next;
        running_sum_ -= window_.front();
        window_.pop_front();
        window_.push_back(std::move(next));
        ++frontier_;
        return window_.back();
    }
};

// F_n^{(k)}, exactly. Iterates the window; the closed-form prefix cases
// (zeros, F_1 = 1, powers of two up to n = k+1) fall out of the recurrence.
inline mpz_class term(const TermIndex& idx) {
    if (idx.n <= 0) return 0;
    SequenceWindow w = SequenceWindow::seed(idx.k);
    while (w.frontier() < idx.n) w.advance();
    return w.frontier_value();
}

inline mpz_class term(int k, long n) { return term(TermIndex(k, n)); }

// Window positioned so its frontier is n (n >= 1).
inline SequenceWindow window_at(int k, long n) {
    if (k < 2) throw DomainError("k must be >= 2");
    if (n < 1) throw DomainError("window frontier must be >= 1");
    SequenceWindow w = SequenceWindow::seed(k);
    while (w.frontier() < n) w.advance();
    return w;
}

}  // namespace kbm::bigseq
