// nilforge: command-line front end for the exact cocycle toolkit.
// Every randomized command takes a seed (generated and printed when absent)
// and emits a JSON report envelope {command, version, seed, params, results,
// elapsed_ms} suitable for archival and independent re-checking.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nilforge/cocycle.hpp"
#include "nilforge/experiments.hpp"
#include "nilforge/gowers.hpp"
#include "nilforge/kernels.hpp"
#include "nilforge/klein.hpp"
#include "nilforge/x5.hpp"

using nlohmann::json;
using namespace nilforge;

namespace {

constexpr const char* kVersion = "0.1.0";

uint64_t resolve_seed(int64_t requested) {
    if (requested >= 0) return uint64_t(requested);
    std::random_device rd;
    uint64_t seed = (uint64_t(rd()) << 32) ^ rd() ^
                    uint64_t(std::chrono::steady_clock::now().time_since_epoch().count());
    std::cerr << "seed not supplied; using generated seed " << seed << "\n";
    return seed;
}

int default_threads() {
    if (const char* env = std::getenv("NILFORGE_THREADS")) {
        int t = std::atoi(env);
        if (t >= 1) return t;
    }
    return 1;
}

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    int64_t ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

json envelope(const std::string& command, uint64_t seed, json params, json results,
              const Timer& timer) {
    return json{{"command", command}, {"version", kVersion},   {"seed", seed},
                {"params", params},   {"results", results},    {"elapsed_ms", timer.ms()}};
}

void emit(const json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream os(path);
        os << j.dump(2) << "\n";
    }
}

std::string verdict_str(CoboundaryVerdict::Decision d) {
    switch (d) {
        case CoboundaryVerdict::Decision::Yes: return "yes";
        case CoboundaryVerdict::Decision::No: return "no";
        default: return "inconclusive";
    }
}

json verdict_json(const CoboundaryVerdict& v) {
    json out{{"decision", verdict_str(v.decision)},
             {"reason", v.reason},
             {"equations_used", v.equations},
             {"exhaustive", v.exhaustive}};
    if (v.witness) {
        json w = json::array();
        for (const auto& d : v.witness->v) w.push_back(d.str());
        out["witness"] = w;
    }
    if (!v.kernel_vector.empty()) {
        out["kernel_vector"] = v.kernel_vector;
        out["kernel_pairing"] = v.kernel_pairing.str();
    }
    return out;
}

PhaseTable load_phase(const std::string& path, int* n_out, std::string* err) {
    std::ifstream is(path);
    if (!is) {
        *err = "cannot open " + path;
        return {};
    }
    std::string head;
    std::getline(is, head);
    is.seekg(0);
    if (head.rfind("PQ ", 0) == 0) {
        auto c = read_pq(is, err);
        if (!c) return {};
        if (n_out) *n_out = c->n;
        return PhaseTable::from(c->s);
    }
    if (head.rfind("POLY ", 0) == 0) {
        auto p = read_poly(is, err);
        if (!p) return {};
        if (n_out) *n_out = p->n;
        return PhaseTable::from(*p);
    }
    auto t = read_table_csv(is, err);
    if (!t) return {};
    if (n_out) *n_out = t->n;
    return PhaseTable::from(*t);
}

int cmd_verify_rho(uint64_t samples, uint64_t seed, const std::string& out) {
    Timer timer;
    auto symmetry = verify_rho_symmetry();
    auto concat = verify_rho_cocycle(samples, seed);
    auto strong = verify_strong_homogeneity(samples, seed + 1);
    auto cert = non_coboundary_certificate(100, seed + 2);
    auto sys = assemble_klein_equations(samples, seed + 3);
    auto elim_torus = decide_coboundary(sys, 2, std::nullopt);
    bool elim_levels_no = true;
    for (uint32_t r = 1; r <= 8; ++r)
        if (decide_coboundary(sys, 2, r).decision != CoboundaryVerdict::Decision::No)
            elim_levels_no = false;
    bool kernel_recheck =
        elim_torus.decision == CoboundaryVerdict::Decision::No &&
        verify_no_certificate(sys, elim_torus.kernel_vector);

    json parts = json::array();
    for (const auto& p : partitions()) parts.push_back({p.ab, p.cd, p.ef});
    json psi = json::array();
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) psi.push_back(psi_eval(Klein(x), Klein(y)).str());
    json descent_rows = json::array();
    for (size_t i = 0; i < cert.rows.size(); ++i)
        descent_rows.push_back({{"coeffs", cert.rows[i]}, {"rhs", cert.rhs[i].str()}});

    bool ok = symmetry.ok && concat.ok && strong.pointwise_ok && strong.quartic_ok &&
              strong.match_ok && cert.pairing_ok && cert.annihilates_ok &&
              elim_torus.decision == CoboundaryVerdict::Decision::No && elim_levels_no &&
              kernel_recheck;
    json results{
        {"ok", ok},
        {"partitions", parts},
        {"psi_table", psi},
        {"symmetry", {{"ok", symmetry.ok}, {"permutations", symmetry.permutations}}},
        {"cocycle",
         {{"ok", concat.ok}, {"checks", concat.checks}, {"detail", concat.detail}}},
        {"strong_homogeneity",
         {{"pointwise_ok", strong.pointwise_ok},
          {"quartic_ok", strong.quartic_ok},
          {"match_ok", strong.match_ok},
          {"checks", strong.checks},
          {"detail", strong.detail}}},
        {"descent",
         {{"rows", descent_rows},
          {"kernel_vector_support",
           {{"row_a", cert.row_a}, {"row_b", cert.row_b}}},
          {"pairing", cert.pairing.str()},
          {"pairing_ok", cert.pairing_ok},
          {"annihilates_coboundaries", cert.annihilates_ok}}},
        {"elimination", verdict_json(elim_torus)},
        {"elimination_mod_levels_no", elim_levels_no},
        {"kernel_certificate_recheck", kernel_recheck},
        {"equations_used", sys.generated},
        {"exhaustive", false}};
    if (samples == 0) results["note"] = "structural checks only (non-exhaustive sampling off)";
    emit(envelope("verify-rho", seed, {{"samples", samples}}, results, timer), out);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact toolkit for dyadic cocycle structures and uniformity experiments"};
    app.set_version_flag("--version", std::string("nilforge ") + kVersion);
    app.require_subcommand(1);

    int threads = default_threads();
    app.add_option("--threads", threads, "worker threads for parallel sweeps");
    // let --threads appear after a subcommand as well
    app.fallthrough();

    // ---- verify-rho -----------------------------------------------------
    auto* vr = app.add_subcommand("verify-rho", "certify the order-five cocycle bundle");
    uint64_t vr_samples = 100000;
    int64_t vr_seed = -1;
    std::string vr_out;
    vr->add_option("--samples", vr_samples, "random instances per certificate");
    vr->add_option("--seed", vr_seed, "seed (generated when absent)");
    vr->add_option("--out", vr_out, "report path");

    // ---- coboundary -----------------------------------------------------
    auto* cb = app.add_subcommand("coboundary", "decide the coboundary problem");
    bool cb_rho = false;
    int cb_n = 2, cb_k = 2;
    uint32_t cb_level = 3;
    bool cb_random = false;
    int64_t cb_value_level = -1;  // -1 decides over the torus
    uint64_t cb_samples = 100000;
    int64_t cb_seed = -1;
    std::string cb_out;
    cb->add_flag("--rho", cb_rho, "decide the built-in order-five cocycle");
    cb->add_flag("--random", cb_random, "decide a random coboundary instance");
    cb->add_option("--n", cb_n, "dimension for the random instance");
    cb->add_option("--k", cb_k, "cocycle order for the random instance");
    cb->add_option("--level", cb_level, "value level for the random instance");
    cb->add_option("--value-level", cb_value_level, "decide over (1/2^r)Z/Z; omit for the torus");
    cb->add_option("--samples", cb_samples, "sampled equation rows when not exhaustive");
    cb->add_option("--seed", cb_seed, "seed");
    cb->add_option("--out", cb_out, "report path");

    // ---- potential --------------------------------------------------------
    auto* pt = app.add_subcommand("potential", "solve a random coboundary instance");
    int pt_n = 3, pt_k = 3;
    uint32_t pt_level = 2;
    int64_t pt_seed = -1;
    std::string pt_out;
    pt->add_option("--n", pt_n, "dimension")->check(CLI::Range(0, 4));
    pt->add_option("--k", pt_k, "cocycle order")->check(CLI::Range(0, 5));
    pt->add_option("--level", pt_level, "value level");
    pt->add_option("--seed", pt_seed, "seed");
    pt->add_option("--out", pt_out, "report path");

    // ---- lift ---------------------------------------------------------------
    auto* lf = app.add_subcommand("lift", "lift a quadratic pair to a pseudo-quintic");
    std::string lf_q, lf_out;
    uint32_t lf_r = 5;
    lf->add_option("--q", lf_q, "two quadratic files, comma separated")->required();
    lf->add_option("--r", lf_r, "value level (1..5)");
    lf->add_option("--out", lf_out, "output pseudo-quintic file")->required();

    // ---- gowers ---------------------------------------------------------------
    auto* gw = app.add_subcommand("gowers", "uniformity norm of a phase file");
    std::string gw_f, gw_engine = "recursive", gw_out;
    int gw_k = 5;
    gw->add_option("--f", gw_f, "phase file (PQ, POLY, or table CSV)")->required();
    gw->add_option("--k", gw_k, "order (norm index is k+1)");
    gw->add_option("--engine", gw_engine, "naive or recursive")
        ->check(CLI::IsMember({"naive", "recursive"}));
    gw->add_option("--out", gw_out, "report path");

    // ---- correlate ---------------------------------------------------------------
    auto* cr = app.add_subcommand("correlate", "correlation of a phase with a polynomial");
    std::string cr_f, cr_p, cr_out;
    cr->add_option("--f", cr_f, "phase file")->required();
    cr->add_option("--p", cr_p, "polynomial file")->required();
    cr->add_option("--out", cr_out, "report path");

    // ---- equid -----------------------------------------------------------------
    auto* eq = app.add_subcommand("equid", "equidistribution of restricted samples");
    int eq_n = 12, eq_M = 1, eq_d = 1;
    uint64_t eq_samples = 100000;
    int64_t eq_seed = -1;
    std::string eq_out;
    eq->add_option("--n", eq_n, "ambient dimension")->check(CLI::Range(1, 24));
    eq->add_option("--M", eq_M, "pinned directions");
    eq->add_option("--d", eq_d, "random directions");
    eq->add_option("--samples", eq_samples, "sample count");
    eq->add_option("--seed", eq_seed, "seed");
    eq->add_option("--out", eq_out, "report path");

    // ---- probe -------------------------------------------------------------------
    auto* pr = app.add_subcommand("probe", "conditional-expectation probe");
    int pr_n = 16, pr_M = 1;
    uint32_t pr_r = 5;
    int64_t pr_seed = -1;
    std::string pr_out;
    pr->add_option("--n", pr_n, "ambient dimension")->check(CLI::Range(1, 18));
    pr->add_option("--M", pr_M, "pinned directions");
    pr->add_option("--r", pr_r, "value level (1..5)");
    pr->add_option("--seed", pr_seed, "seed");
    pr->add_option("--out", pr_out, "report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*vr) return cmd_verify_rho(vr_samples, resolve_seed(vr_seed), vr_out);

        if (*cb) {
            Timer timer;
            uint64_t seed = resolve_seed(cb_seed);
            if (cb_rho == cb_random) {
                std::cerr << "coboundary: pick exactly one of --rho / --random\n";
                return 2;
            }
            std::optional<uint32_t> level;
            if (cb_value_level >= 0) level = uint32_t(cb_value_level);
            CoboundaryVerdict v;
            json params;
            if (cb_rho) {
                auto sys = assemble_klein_equations(cb_samples, seed);
                v = decide_coboundary(sys, 2, level);
                params = {{"target", "rho"}, {"samples", cb_samples}};
            } else {
                Rng rng(seed);
                FuncTable f(cb_n);
                for (auto& d : f.v) d = Dyadic::make(rng.next(), cb_level);
                v = decide_coboundary(coboundary_of(f, cb_k), level, cb_samples, seed + 1);
                params = {{"target", "random-coboundary"},
                          {"n", cb_n},
                          {"k", cb_k},
                          {"level", cb_level},
                          {"samples", cb_samples}};
            }
            params["value_level"] = cb_value_level;
            emit(envelope("coboundary", seed, params, verdict_json(v), timer), cb_out);
            return 0;
        }

        if (*pt) {
            Timer timer;
            uint64_t seed = resolve_seed(pt_seed);
            Rng rng(seed);
            FuncTable f(pt_n);
            for (auto& d : f.v) d = Dyadic::make(rng.next(), pt_level);
            auto rho = coboundary_of(f, pt_k);
            auto found = potential_finder(rho);
            bool exhaustive = false;
            bool verified = verify_potential(rho, found, 20000, seed + 1, &exhaustive);
            auto verdict = decide_coboundary(rho, std::nullopt, 20000, seed + 2);
            json results{{"verified", verified},
                         {"verification_exhaustive", exhaustive},
                         {"decision", verdict_str(verdict.decision)},
                         {"agrees", verified &&
                                        verdict.decision != CoboundaryVerdict::Decision::No}};
            emit(envelope("potential", seed,
                          {{"n", pt_n}, {"k", pt_k}, {"level", pt_level}}, results, timer),
                 pt_out);
            return verified ? 0 : 1;
        }

        if (*lf) {
            Timer timer;
            auto comma = lf_q.find(',');
            if (comma == std::string::npos) {
                std::cerr << "lift: --q expects two files separated by a comma\n";
                return 2;
            }
            std::string err;
            auto read_quad = [&](const std::string& path) -> std::optional<F2Poly> {
                std::ifstream is(path);
                if (!is) {
                    err = "cannot open " + path;
                    return std::nullopt;
                }
                auto p = read_poly(is, &err);
                if (!p) return std::nullopt;
                auto q = classical_from_polyrep(*p);
                if (!q) err = path + ": not a classical polynomial";
                else if (q->degree() > 2) {
                    err = path + ": degree exceeds 2";
                    return std::nullopt;
                }
                return q;
            };
            auto q1 = read_quad(lf_q.substr(0, comma));
            auto q2 = q1 ? read_quad(lf_q.substr(comma + 1)) : std::nullopt;
            if (!q1 || !q2) {
                std::cerr << "lift: " << err << "\n";
                return 1;
            }
            if (q1->n != q2->n) {
                std::cerr << "lift: dimension mismatch between the two quadratics\n";
                return 1;
            }
            X5Cube c;
            c.n = q1->n;
            c.r = lf_r;
            c.q = QuadPair{*q1, *q2};
            c.s = lift(c.q, lf_r);
            std::ofstream os(lf_out);
            write_pq(os, c);
            os.close();
            json results{{"n", c.n}, {"r", c.r}, {"out", lf_out}};
            emit(envelope("lift", 0, {{"q", lf_q}, {"r", lf_r}}, results, timer), "");
            return 0;
        }

        if (*gw) {
            Timer timer;
            int n = 0;
            std::string err;
            auto f = load_phase(gw_f, &n, &err);
            if (f.num.empty()) {
                std::cerr << "gowers: " << err << "\n";
                return 1;
            }
            double norm = gw_engine == "naive" ? gowers_norm_naive(f, gw_k)
                                               : gowers_norm_recursive(f, gw_k, threads);
            json results{{"norm", norm}, {"engine", gw_engine}, {"n", n}, {"k", gw_k}};
            emit(envelope("gowers", 0, {{"f", gw_f}, {"k", gw_k}, {"engine", gw_engine}},
                          results, timer),
                 gw_out);
            return 0;
        }

        if (*cr) {
            Timer timer;
            int n = 0;
            std::string err;
            auto f = load_phase(cr_f, &n, &err);
            if (f.num.empty()) {
                std::cerr << "correlate: " << err << "\n";
                return 1;
            }
            std::ifstream is(cr_p);
            auto p = read_poly(is, &err);
            if (!p) {
                std::cerr << "correlate: " << err << "\n";
                return 1;
            }
            auto c = correlation(f, *p);
            json results{{"magnitude", c.magnitude}, {"n", n}};
            if (c.exact)
                results["exact"] = {{"numerator", c.exact->first},
                                    {"denominator", c.exact->second}};
            emit(envelope("correlate", 0, {{"f", cr_f}, {"p", cr_p}}, results, timer), cr_out);
            return 0;
        }

        if (*eq) {
            Timer timer;
            uint64_t seed = resolve_seed(eq_seed);
            auto cube = sample_ncube(eq_n, 5, seed);
            auto rep = estimate_tv(cube, eq_M, eq_d, eq_samples, seed + 1);
            json results{{"tv", rep.tv},
                         {"selfcal_tv", rep.selfcal_tv},
                         {"band", rep.band},
                         {"sigma_size", rep.sigma_size},
                         {"selfcal_within_band", rep.selfcal_tv <= rep.band}};
            emit(envelope("equid", seed,
                          {{"n", eq_n}, {"M", eq_M}, {"d", eq_d}, {"samples", eq_samples}},
                          results, timer),
                 eq_out);
            return 0;
        }

        if (*pr) {
            Timer timer;
            uint64_t seed = resolve_seed(pr_seed);
            auto rep = measurability_probe(pr_n, pr_M, pr_r, seed);
            auto row = [](const ProbeRow& r) {
                return json{{"error", r.error}, {"cells", r.cells}, {"overfit", r.overfit}};
            };
            json results{{"errors",
                          {{"main", row(rep.main)},
                           {"control_self", row(rep.control_self)},
                           {"control_const", row(rep.control_const)},
                           {"contrast", row(rep.contrast)}}},
                         {"refinement", rep.refinement},
                         {"correlation", rep.correlation},
                         {"contrast_correlation", rep.contrast_correlation},
                         {"cells", rep.main.cells},
                         {"points", rep.points}};
            emit(envelope("probe", seed,
                          {{"n", pr_n}, {"M", pr_M}, {"r", pr_r}}, results, timer),
                 pr_out);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
