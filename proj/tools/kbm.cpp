// kbm - certified computations around the intersections of k-generalized
// Fibonacci sequences: exact terms, certified dominant roots, bound chains,
// Dujella-Petho reduction certificates, and the coincidence search.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "kbm/algnum.hpp"
#include "kbm/bigseq.hpp"
#include "kbm/certify.hpp"
#include "kbm/jsonio.hpp"
#include "kbm/linforms.hpp"
#include "kbm/meet.hpp"
#include "kbm/redux.hpp"

namespace {

using kbm::jsonio::ordered_json;

void emit(const ordered_json& j) { std::cout << j.dump() << "\n"; }

int run(int argc, char** argv) {
    CLI::App app{"certified k-bonacci intersection toolkit"};
    app.require_subcommand(1);

    // term
    auto* c_term = app.add_subcommand("term", "exact F_n^{(k)}");
    int t_k = 2;
    long t_n = 1;
    c_term->add_option("k", t_k)->required();
    c_term->add_option("n", t_n)->required();

    // root
    auto* c_root = app.add_subcommand("root", "certified dominant root of psi_k");
    int r_k = 2;
    long r_bits = 128;
    c_root->add_option("k", r_k)->required();
    c_root->add_option("--bits", r_bits, "target precision in bits");

    // bounds
    auto* c_bounds = app.add_subcommand("bounds", "paper bound chains");
    long b_k = 0, b_ell = 0;
    bool b_chain = false;
    c_bounds->add_option("--k", b_k, "bound ell and M in terms of k");
    c_bounds->add_option("--ell", b_ell, "bound m in terms of ell");
    c_bounds->add_flag("--chain", b_chain, "emit the full constant-chain replay");

    // reduce
    auto* c_reduce = app.add_subcommand("reduce", "Dujella-Petho reduction certificate");
    int d_k = 2;
    std::string d_m;
    c_reduce->add_option("k", d_k)->required();
    c_reduce->add_option("--M", d_m, "coefficient cap (decimal; default desk-scale)");

    // search
    auto* c_search = app.add_subcommand("search", "coincidence search by k-way merge");
    int s_kmin = 2, s_kmax = 10;
    long s_bits = 20, s_every = 0;
    std::string s_ckpt, s_resume;
    bool s_longrun = false;
    c_search->add_option("--kmin", s_kmin);
    c_search->add_option("--kmax", s_kmax);
    c_search->add_option("--bits-bound", s_bits, "explore terms up to 2^bits");
    c_search->add_option("--checkpoint", s_ckpt, "checkpoint file to write");
    c_search->add_option("--checkpoint-every", s_every, "heap pops between checkpoints");
    c_search->add_option("--resume", s_resume, "resume from a checkpoint file");
    c_search->add_flag("--long-run", s_longrun, "allow full-scale ranges (hours of runtime)");

    // certify
    auto* c_cert = app.add_subcommand("certify", "scaled-down replay of the proof pipeline");
    int y_kmax = 6;
    long y_bits = 64;
    std::string y_mcap;
    c_cert->add_option("--kmax", y_kmax);
    c_cert->add_option("--search-bits", y_bits);
    c_cert->add_option("--M-cap", y_mcap, "desk-scale cap on M_k (decimal)");

    CLI11_PARSE(app, argc, argv);

    if (*c_term) {
        emit(ordered_json{{"value", kbm::bigseq::term(t_k, t_n).get_str()}});
        return 0;
    }

    if (*c_root) {
        auto root = kbm::algnum::dominant_root(r_k, r_bits);
        ordered_json j{{"k", root.k}};
        j["root"] = kbm::jsonio::ball_json(root.value);
        emit(j);
        return 0;
    }

    if (*c_bounds) {
        if ((b_k == 0) == (b_ell == 0))
            throw kbm::DomainError("bounds: pass exactly one of --k / --ell");
        if (b_k != 0) {
            ordered_json j{{"k", b_k},
                           {"ell_bound", kbm::linforms::bound_ell_of_k(b_k)},
                           {"M", kbm::linforms::bound_M_of_k(b_k)}};
            if (b_chain) j["chain"] = kbm::jsonio::chain_report_json(
                kbm::linforms::replay_chain_section3(b_k));
            emit(j);
        } else {
            ordered_json j{{"ell", b_ell},
                           {"m_bound", kbm::linforms::bound_m_of_ell(b_ell)}};
            if (b_chain) j["chain"] = kbm::jsonio::chain_report_json(
                kbm::linforms::replay_chain_section2(b_ell));
            emit(j);
        }
        return 0;
    }

    if (*c_reduce) {
        mpz_class M;
        if (d_m.empty()) {
            M = std::min(kbm::linforms::bound_M_of_k_int(d_k),
                         kbm::certify::default_desk_M_cap());
        } else {
            M = mpz_class(d_m);
        }
        emit(kbm::jsonio::cert_json(kbm::redux::reduce_for_k(d_k, M)));
        return 0;
    }

    if (*c_search) {
        if (!s_longrun && (s_kmax > 100 || s_bits > 2000))
            throw kbm::DomainError(
                "search: ranges toward the full-scale run need --long-run");
        auto write_ckpt = [&s_ckpt](const kbm::meet::MergeSearch& ms) {
            if (s_ckpt.empty()) return;
            auto blob = ms.checkpoint();
            std::ofstream f(s_ckpt, std::ios::binary | std::ios::trunc);
            f.write(reinterpret_cast<const char*>(blob.data()),
                    static_cast<std::streamsize>(blob.size()));
        };

        std::vector<kbm::meet::CoincidenceHit> hits;
        if (!s_resume.empty()) {
            std::ifstream f(s_resume, std::ios::binary);
            if (!f) throw kbm::DomainError("search: cannot open checkpoint " + s_resume);
            std::vector<uint8_t> blob((std::istreambuf_iterator<char>(f)),
                                      std::istreambuf_iterator<char>());
            auto ms = kbm::meet::checkpoint_load(blob);
            ms.run(write_ckpt);
            hits = ms.hits();
        } else {
            kbm::meet::SearchConfig cfg;
            cfg.k_min = s_kmin;
            cfg.k_max = s_kmax;
            mpz_ui_pow_ui(cfg.value_bound.get_mpz_t(), 2,
                          static_cast<unsigned long>(s_bits));
            cfg.checkpoint_every = s_every;
            kbm::meet::MergeSearch ms(cfg);
            ms.run(write_ckpt);
            if (!s_ckpt.empty()) write_ckpt(ms);
            hits = ms.hits();
        }
        for (const auto& h : hits) emit(kbm::jsonio::hit_json(h));
        return 0;
    }

    if (*c_cert) {
        mpz_class cap = y_mcap.empty() ? kbm::certify::default_desk_M_cap() : mpz_class(y_mcap);
        auto rep = kbm::certify::certify_pipeline(y_kmax, y_bits, cap);
        emit(kbm::certify::report_json(rep));
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const kbm::DomainError& e) {
        emit(ordered_json{{"error", {{"type", "domain"}, {"message", e.what()}}}});
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const kbm::PrecisionExhausted& e) {
        emit(ordered_json{{"error", {{"type", "precision-exhausted"}, {"message", e.what()}}}});
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return 3;
    } catch (const kbm::IndeterminateComparison& e) {
        emit(ordered_json{{"error", {{"type", "indeterminate"}, {"message", e.what()}}}});
        std::cerr << "indeterminate comparison: " << e.what() << "\n";
        return 3;
    } catch (const kbm::ResourceLimit& e) {
        emit(ordered_json{{"error", {{"type", "resource-limit"}, {"message", e.what()}}}});
        std::cerr << "resource limit: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        emit(ordered_json{{"error", {{"type", "internal"}, {"message", e.what()}}}});
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
