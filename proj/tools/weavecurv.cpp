// Command-line interface: loads web description files, runs the rank /
// connection / curvature / flat-section pipeline, and writes JSON run
// reports.  Exit codes: 0 = flat (or check passed) at the requested
// certification level, 1 = not flat (witness in the report), 2 = error.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "weavecurv/report.hpp"

using namespace weavecurv;

namespace {

WebSpec load_web(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open web file '" + path + "'");
    OrderedJson j = OrderedJson::parse(in);
    return web_from_json(j);
}

std::map<std::size_t, Rat> parse_param_pins(const WebSpec& w,
                                            const std::vector<std::string>& specs) {
    std::map<std::size_t, Rat> pinned;
    for (const std::string& s : specs) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw Error("expected name=value in --param, got '" + s + "'");
        const std::string name = s.substr(0, eq);
        const auto idx = w.ctx()->index_of(name);
        if (!idx) throw Error("unknown parameter '" + name + "'");
        if (w.ctx()->is_coord(*idx))
            throw Error("'" + name + "' is a coordinate, not a parameter");
        pinned[*idx] = Rat::parse(s.substr(eq + 1));
    }
    return pinned;
}

WebSpec substitute_params(WebSpec w, const std::map<std::size_t, Rat>& pinned) {
    for (const auto& [var, val] : pinned) w = w.with_param(var, val);
    return w;
}

std::vector<Rat> parse_rat_list(const std::string& text) {
    std::vector<Rat> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(Rat::parse(item));
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

void emit(const std::string& out_path, const OrderedJson& j) {
    const std::string text = j.dump(2) + "\n";
    if (out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw Error("cannot write '" + out_path + "'");
    f << text;
}

std::string echo_command(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

long long elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
}

struct CurvatureArgs {
    std::string web_path;
    std::string backend = "point";
    int samples = 5;
    std::uint64_t seed = 1;
    std::uint64_t prime = kDefaultPrime;
    std::vector<std::string> params;
    std::string subset;
    std::string out = "-";
};

void add_curvature_flags(CLI::App* sc, CurvatureArgs& a) {
    sc->add_option("--web", a.web_path, "web description file")->required();
    sc->add_option("--backend", a.backend, "symbolic | point (default point)");
    sc->add_option("--samples", a.samples, "number of sample points (point backend)");
    sc->add_option("--seed", a.seed, "master seed for point sampling");
    sc->add_option("--prime", a.prime, "prime modulus for the point backend");
    sc->add_option("--param", a.params, "pin a parameter, name=value (repeatable)");
    sc->add_option("--subset", a.subset, "comma-separated field labels; run on that sub-web");
    sc->add_option("--out", a.out, "output file, '-' for stdout");
}

int run_curvature(const CurvatureArgs& a, const std::string& cmd, bool verdict_only) {
    const auto start = std::chrono::steady_clock::now();
    WebSpec w = load_web(a.web_path);
    if (!a.subset.empty()) w = w.subweb(parse_int_list(a.subset));
    const auto pinned = parse_param_pins(w, a.params);

    CurvatureReport rep;
    if (a.backend == "symbolic") {
        rep = check_max_rank(substitute_params(std::move(w), pinned), CertLevel::Symbolic);
    } else if (a.backend == "point") {
        CertifyOptions o;
        o.level = CertLevel::PointPrimeField;
        o.samples = a.samples;
        o.seed = a.seed;
        o.prime = a.prime;
        o.pinned = pinned;
        rep = check_max_rank(w, o);
    } else {
        throw Error("unknown backend '" + a.backend + "' (expected symbolic or point)");
    }

    OrderedJson payload;
    if (verdict_only) {
        payload["verdict"] = to_string(rep.verdict);
    } else {
        payload = curvature_report_to_json(rep);
    }
    emit(a.out, make_report(cmd, rep.backend, rep.seed, elapsed_ms(start), std::move(payload)));
    return rep.flat() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvature criterion for maximal rank of webs of curves"};
    app.require_subcommand(1);
    const std::string cmd = echo_command(argc, argv);

    // rank-bound
    auto* sc_rb = app.add_subcommand("rank-bound", "solution-space dimensions and the rank bound");
    int rb_n = 0, rb_d = 0;
    std::string rb_out = "-";
    sc_rb->add_option("-n", rb_n, "ambient dimension")->required();
    sc_rb->add_option("-d", rb_d, "number of fields")->required();
    sc_rb->add_option("--out", rb_out, "output file, '-' for stdout");

    // builtin
    auto* sc_bi = app.add_subcommand("builtin", "emit a built-in web as a web file");
    std::string bi_name;
    int bi_n = 3;
    std::string bi_deform;
    std::string bi_out = "-";
    sc_bi->add_option("name", bi_name, "family name (w0)")->required();
    sc_bi->add_option("-n", bi_n, "ambient dimension");
    sc_bi->add_option("--deform", bi_deform, "deformation parameter name (only 'c')");
    sc_bi->add_option("--out", bi_out, "output file, '-' for stdout");

    // matrices
    auto* sc_mx = app.add_subcommand("matrices", "shapes and ranks of the level-h system blocks");
    std::string mx_web, mx_backend = "symbolic", mx_out = "-";
    int mx_order = 1;
    std::uint64_t mx_seed = 1;
    std::vector<std::string> mx_params;
    sc_mx->add_option("--web", mx_web, "web description file")->required();
    sc_mx->add_option("--order", mx_order, "prolongation level h")->required();
    sc_mx->add_option("--backend", mx_backend, "symbolic | point (default symbolic)");
    sc_mx->add_option("--seed", mx_seed, "sample-point seed (point backend)");
    sc_mx->add_option("--param", mx_params, "pin a parameter, name=value (repeatable)");
    sc_mx->add_option("--out", mx_out, "output file, '-' for stdout");

    // connection
    auto* sc_cn = app.add_subcommand("connection", "kernel basis and connection matrices");
    std::string cn_web, cn_backend = "symbolic", cn_out = "-";
    std::uint64_t cn_seed = 1;
    std::vector<std::string> cn_params;
    sc_cn->add_option("--web", cn_web, "web description file")->required();
    sc_cn->add_option("--backend", cn_backend, "symbolic | point (default symbolic)");
    sc_cn->add_option("--seed", cn_seed, "sample-point seed (point backend)");
    sc_cn->add_option("--param", cn_params, "pin a parameter, name=value (repeatable)");
    sc_cn->add_option("--out", cn_out, "output file, '-' for stdout");

    // curvature / check-max-rank
    auto* sc_cv = app.add_subcommand("curvature", "curvature matrices and flatness verdict");
    CurvatureArgs cv;
    add_curvature_flags(sc_cv, cv);
    auto* sc_ck = app.add_subcommand("check-max-rank", "flatness verdict only");
    CurvatureArgs ck;
    add_curvature_flags(sc_ck, ck);

    // flat-section
    auto* sc_fs = app.add_subcommand("flat-section", "grow a formal solution from initial data");
    std::string fs_web, fs_point, fs_init, fs_out = "-";
    int fs_order = 0;
    std::vector<std::string> fs_params;
    sc_fs->add_option("--web", fs_web, "web description file")->required();
    sc_fs->add_option("--point", fs_point, "comma-separated base point values")->required();
    sc_fs->add_option("--init", fs_init, "initial pivot data: e<k> or comma-separated values")
        ->required();
    sc_fs->add_option("--order", fs_order, "truncation order")->required();
    sc_fs->add_option("--param", fs_params, "pin a parameter, name=value (repeatable)");
    sc_fs->add_option("--out", fs_out, "output file, '-' for stdout");

    // subweb
    auto* sc_sw = app.add_subcommand("subweb", "verify the sub-web connection nesting");
    std::string sw_web, sw_keep, sw_out = "-";
    std::vector<std::string> sw_params;
    sc_sw->add_option("--web", sw_web, "web description file")->required();
    sc_sw->add_option("--keep", sw_keep, "comma-separated field labels to keep")->required();
    sc_sw->add_option("--param", sw_params, "pin a parameter, name=value (repeatable)");
    sc_sw->add_option("--out", sw_out, "output file, '-' for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const auto start = std::chrono::steady_clock::now();

        if (sc_rb->parsed()) {
            const RankBoundTable rb = rank_bound(rb_n, rb_d);
            emit(rb_out, make_report(cmd, "exact", 0, elapsed_ms(start), rank_bound_to_json(rb)));
            return 0;
        }

        if (sc_bi->parsed()) {
            if (bi_name != "w0") throw Error("unknown builtin family '" + bi_name + "'");
            if (!bi_deform.empty() && bi_deform != "c")
                throw Error("only deformation parameter name 'c' is supported");
            emit(bi_out, web_to_json(WebSpec::builtin_w0(bi_n, !bi_deform.empty())));
            return 0;
        }

        if (sc_mx->parsed()) {
            WebSpec w = load_web(mx_web);
            const auto pinned = parse_param_pins(w, mx_params);
            OrderedJson payload;
            payload["order"] = mx_order;
            auto block = [](std::size_t r, std::size_t c, int rank) {
                OrderedJson b;
                b["rows"] = r;
                b["cols"] = c;
                if (rank >= 0) b["rank"] = rank;
                return b;
            };
            std::string backend_name;
            if (mx_backend == "symbolic") {
                const WebSpec ws = substitute_params(std::move(w), pinned);
                const SymbolicBackend bk(ws.ctx());
                backend_name = bk.name();
                const ProlongedSystem<SymbolicBackend> sys(ws, bk, mx_order);
                const auto M = sys.M(mx_order);
                const auto P = sys.P(mx_order);
                const auto Q = sys.Q(mx_order);
                payload["M"] = block(M.rows(), M.cols(), rank_of(M, bk));
                payload["P"] = block(P.rows(), P.cols(), rank_of(P, bk));
                payload["Q"] = block(Q.rows(), Q.cols(), -1);
            } else if (mx_backend == "point") {
                const std::vector<Rat> pt = w.sample_point(mx_seed, pinned);
                const JetBackend<Rat> bk(w.ctx(), pt, mx_order + 1);
                backend_name = bk.name();
                const ProlongedSystem<JetBackend<Rat>> sys(w, bk, mx_order);
                const auto M = sys.M(mx_order);
                const auto P = sys.P(mx_order);
                const auto Q = sys.Q(mx_order);
                payload["M"] = block(M.rows(), M.cols(), rank_of(M, bk));
                payload["P"] = block(P.rows(), P.cols(), rank_of(P, bk));
                payload["Q"] = block(Q.rows(), Q.cols(), -1);
                OrderedJson pj = OrderedJson::array();
                for (const Rat& c : pt) pj.push_back(c.str());
                payload["point"] = std::move(pj);
            } else {
                throw Error("unknown backend '" + mx_backend + "'");
            }
            emit(mx_out, make_report(cmd, backend_name, mx_seed, elapsed_ms(start),
                                     std::move(payload)));
            return 0;
        }

        if (sc_cn->parsed()) {
            WebSpec w = load_web(cn_web);
            const auto pinned = parse_param_pins(w, cn_params);
            OrderedJson payload;
            std::string backend_name;
            auto fill = [&payload](const auto& cd, auto&& entry_str) {
                payload["h0"] = cd.h0;
                payload["ro"] = cd.ro;
                payload["pivots"] = cd.pivots;
                OrderedJson n2;
                n2["rows"] = cd.N2.rows();
                n2["cols"] = cd.N2.cols();
                payload["N2"] = std::move(n2);
                OrderedJson mats = OrderedJson::array();
                for (std::size_t k = 0; k < cd.A.size(); ++k) {
                    OrderedJson mj;
                    mj["k"] = k + 1;
                    OrderedJson rows = OrderedJson::array();
                    for (std::size_t i = 0; i < cd.A[k].rows(); ++i) {
                        OrderedJson rj = OrderedJson::array();
                        for (std::size_t j = 0; j < cd.A[k].cols(); ++j)
                            rj.push_back(entry_str(cd.A[k](i, j)));
                        rows.push_back(std::move(rj));
                    }
                    mj["entries"] = std::move(rows);
                    mats.push_back(std::move(mj));
                }
                payload["A"] = std::move(mats);
            };
            if (cn_backend == "symbolic") {
                const WebSpec ws = substitute_params(std::move(w), pinned);
                const SymbolicBackend bk(ws.ctx());
                backend_name = bk.name();
                const auto cd = build_connection(ws, bk);
                fill(cd, [](const RationalFunction& f) { return rf_to_string(f.reduced()); });
            } else if (cn_backend == "point") {
                const std::vector<Rat> pt = w.sample_point(cn_seed, pinned);
                const int h0 = w.d() - w.n();
                const JetBackend<Rat> bk(w.ctx(), pt, h0 + 1);
                backend_name = bk.name();
                const auto cd = build_connection(w, bk);
                fill(cd, [](const Jet<Rat>& j) { return j.value().str(); });
                OrderedJson pj = OrderedJson::array();
                for (const Rat& c : pt) pj.push_back(c.str());
                payload["point"] = std::move(pj);
            } else {
                throw Error("unknown backend '" + cn_backend + "'");
            }
            emit(cn_out, make_report(cmd, backend_name, cn_seed, elapsed_ms(start),
                                     std::move(payload)));
            return 0;
        }

        if (sc_cv->parsed()) return run_curvature(cv, cmd, false);
        if (sc_ck->parsed()) return run_curvature(ck, cmd, true);

        if (sc_fs->parsed()) {
            WebSpec w = load_web(fs_web);
            const auto pinned = parse_param_pins(w, fs_params);
            w = substitute_params(std::move(w), pinned);
            const std::vector<Rat> point = parse_rat_list(fs_point);
            const std::size_t ro = pivot_columns(w.n(), w.d()).size();
            std::vector<Rat> init;
            if (!fs_init.empty() && fs_init[0] == 'e') {
                const int k = std::stoi(fs_init.substr(1));
                if (k < 1 || static_cast<std::size_t>(k) > ro)
                    throw Error("unit-vector index out of range in --init");
                init.assign(ro, Rat(0));
                init[static_cast<std::size_t>(k - 1)] = Rat(1);
            } else {
                init = parse_rat_list(fs_init);
            }
            try {
                const FlatSectionSeries fs = formal_flat_section(w, point, init, fs_order);
                emit(fs_out, make_report(cmd, "jet-rational", 0, elapsed_ms(start),
                                         flat_section_to_json(fs)));
                return 0;
            } catch (const InconsistentProlongation& e) {
                OrderedJson payload;
                payload["inconsistent"] = {{"u", e.equation_u}, {"t", e.equation_t}};
                payload["message"] = e.what();
                emit(fs_out, make_report(cmd, "jet-rational", 0, elapsed_ms(start),
                                         std::move(payload)));
                return 1;
            }
        }

        if (sc_sw->parsed()) {
            WebSpec w = load_web(sw_web);
            const auto pinned = parse_param_pins(w, sw_params);
            w = substitute_params(std::move(w), pinned);
            const SubwebNestingReport rep = subweb_nesting_check(w, parse_int_list(sw_keep));
            emit(sw_out, make_report(cmd, "symbolic", 0, elapsed_ms(start),
                                     nesting_report_to_json(rep)));
            return rep.ok() ? 0 : 1;
        }

        throw Error("no subcommand selected");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
