#pragma once

// JSON surface: web description files and run reports.
//
// A web file is a JSON document
//   { "n": int, "d": int, "parameters": [names],
//     "fields": [ { "a": int, "components": [expressions] } ] }
// with one entry per non-coordinate field a in {n+1..d} and component
// strings in the expression grammar of expr.hpp.
//
// A run report is an envelope
//   { "command": ..., "version": ..., "backend": ..., "seed": ...,
//     "timing_ms": ..., "payload": ... }
// whose payload depends only on the inputs and the seed: rerunning the
// same invocation reproduces the payload byte for byte (timing_ms is
// the only field allowed to differ).  64-bit integers and rationals are
// rendered as decimal strings so no consumer ever rounds them.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "certify.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "flat_section.hpp"
#include "prolong.hpp"
#include "web.hpp"

namespace weavecurv {

using OrderedJson = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

// --- web files -----------------------------------------------------------

inline OrderedJson web_to_json(const WebSpec& w) {
    OrderedJson j;
    j["n"] = w.n();
    j["d"] = w.d();
    OrderedJson params = OrderedJson::array();
    const CtxPtr& ctx = w.ctx();
    for (std::size_t i = ctx->num_coords(); i < ctx->num_vars(); ++i) params.push_back(ctx->name(i));
    j["parameters"] = std::move(params);
    OrderedJson fields = OrderedJson::array();
    for (int a = w.n() + 1; a <= w.d(); ++a) {
        OrderedJson fj;
        fj["a"] = a;
        OrderedJson comps = OrderedJson::array();
        for (int i = 1; i <= w.n(); ++i) comps.push_back(rf_to_string(w.f(i, a)));
        fj["components"] = std::move(comps);
        fields.push_back(std::move(fj));
    }
    j["fields"] = std::move(fields);
    return j;
}

inline WebSpec web_from_json(const OrderedJson& j) {
    if (!j.is_object()) throw Error("web file must be a JSON object");
    const int n = j.at("n").get<int>();
    const int d = j.at("d").get<int>();
    if (n < 2) throw Error("need ambient dimension at least 2");
    if (d <= n) throw Error("need more fields than coordinates");
    std::vector<std::string> params;
    if (j.contains("parameters"))
        for (const auto& p : j.at("parameters")) params.push_back(p.get<std::string>());
    const CtxPtr ctx = VariableContext::standard(static_cast<std::size_t>(n), params);

    std::vector<std::vector<RationalFunction>> cols(static_cast<std::size_t>(d - n));
    std::vector<char> seen(static_cast<std::size_t>(d - n), 0);
    const auto& fields = j.at("fields");
    if (static_cast<int>(fields.size()) != d - n)
        throw Error("expected one field entry per non-coordinate field");
    for (const auto& fj : fields) {
        const int a = fj.at("a").get<int>();
        if (a <= n || a > d) throw Error("field label out of range in web file");
        if (seen[static_cast<std::size_t>(a - n - 1)])
            throw Error("duplicate field label in web file");
        seen[static_cast<std::size_t>(a - n - 1)] = 1;
        const auto& comps = fj.at("components");
        if (static_cast<int>(comps.size()) != n)
            throw Error("expected one component per coordinate");
        std::vector<RationalFunction> col;
        col.reserve(static_cast<std::size_t>(n));
        for (const auto& c : comps) col.push_back(parse_expression(c.get<std::string>(), ctx));
        cols[static_cast<std::size_t>(a - n - 1)] = std::move(col);
    }
    return WebSpec::make(n, ctx, std::move(cols));
}

// --- payload builders ----------------------------------------------------

inline OrderedJson rank_bound_to_json(const RankBoundTable& rb) {
    OrderedJson j;
    j["n"] = rb.n;
    j["d"] = rb.d;
    j["h0"] = rb.h0;
    OrderedJson levels = OrderedJson::array();
    for (const auto& [h, dim] : rb.level_dims) {
        OrderedJson lj;
        lj["h"] = h;
        lj["dim"] = dim;
        levels.push_back(std::move(lj));
    }
    j["levels"] = std::move(levels);
    j["bound"] = rb.bound;
    return j;
}

inline OrderedJson pattern_to_json(const PairPattern& p) {
    OrderedJson j;
    j["k"] = p.k;
    j["m"] = p.m;
    OrderedJson rows = OrderedJson::array();
    for (int i = 0; i < p.ro; ++i) {
        std::string bits(static_cast<std::size_t>(p.ro), '0');
        for (int c = 0; c < p.ro; ++c)
            if (p.at(i, c)) bits[static_cast<std::size_t>(c)] = '1';
        rows.push_back(std::move(bits));
    }
    j["rows"] = std::move(rows);
    return j;
}

inline OrderedJson curvature_report_to_json(const CurvatureReport& rep) {
    OrderedJson j;
    j["n"] = rep.n;
    j["d"] = rep.d;
    j["h0"] = rep.h0;
    j["ro"] = rep.ro;
    j["pivots"] = rep.pivots;
    j["level"] = to_string(rep.level);
    j["backend"] = rep.backend;
    j["verdict"] = to_string(rep.verdict);
    OrderedJson pairs = OrderedJson::array();
    for (const auto& p : rep.pattern) pairs.push_back(pattern_to_json(p));
    j["pairs"] = std::move(pairs);
    OrderedJson wits = OrderedJson::array();
    for (const Witness& w : rep.witnesses) {
        OrderedJson wj;
        wj["k"] = w.k;
        wj["m"] = w.m;
        wj["row"] = w.row;
        wj["col"] = w.col;
        wj["sample"] = w.sample;
        wits.push_back(std::move(wj));
    }
    j["witnesses"] = std::move(wits);
    if (rep.level != CertLevel::Symbolic) {
        j["seed"] = std::to_string(rep.seed);
        if (rep.prime) j["prime"] = std::to_string(rep.prime);
        OrderedJson seeds = OrderedJson::array();
        for (std::uint64_t s : rep.sample_seeds) seeds.push_back(std::to_string(s));
        j["sample_seeds"] = std::move(seeds);
        OrderedJson pts = OrderedJson::array();
        for (const auto& pt : rep.points) {
            OrderedJson pj = OrderedJson::array();
            for (const Rat& c : pt) pj.push_back(c.str());
            pts.push_back(std::move(pj));
        }
        j["points"] = std::move(pts);
        OrderedJson flats = OrderedJson::array();
        for (std::uint8_t f : rep.sample_flat) flats.push_back(static_cast<int>(f));
        j["sample_flat"] = std::move(flats);
    }
    return j;
}

inline OrderedJson nesting_report_to_json(const SubwebNestingReport& rep) {
    OrderedJson j;
    j["keep"] = rep.keep;
    j["ro_ambient"] = rep.ro_ambient;
    j["ro_sub"] = rep.ro_sub;
    j["block_matches"] = rep.block_matches;
    j["complement_zero"] = rep.complement_zero;
    j["sub_flat"] = rep.sub_flat;
    j["ok"] = rep.ok();
    return j;
}

inline OrderedJson flat_section_to_json(const FlatSectionSeries& fs) {
    OrderedJson j;
    j["n"] = fs.n;
    j["d"] = fs.d;
    j["h0"] = fs.h0;
    j["order"] = fs.order;
    OrderedJson pj = OrderedJson::array();
    for (const Rat& c : fs.point) pj.push_back(c.str());
    j["point"] = std::move(pj);
    OrderedJson slots = OrderedJson::array();
    for (const Expo& e : fs.slots) {
        OrderedJson ej = OrderedJson::array();
        for (std::uint32_t c : e) ej.push_back(c);
        slots.push_back(std::move(ej));
    }
    j["slots"] = std::move(slots);
    auto table = [](const std::vector<std::vector<Rat>>& rows) {
        OrderedJson t = OrderedJson::array();
        for (const auto& row : rows) {
            OrderedJson rj = OrderedJson::array();
            for (const Rat& c : row) rj.push_back(c.str());
            t.push_back(std::move(rj));
        }
        return t;
    };
    j["deriv"] = table(fs.deriv);
    j["taylor"] = table(fs.taylor);
    return j;
}

// --- report envelope -----------------------------------------------------

inline OrderedJson make_report(const std::string& command, const std::string& backend,
                               std::uint64_t seed, long long timing_ms, OrderedJson payload) {
    OrderedJson j;
    j["command"] = command;
    j["version"] = kToolVersion;
    j["backend"] = backend;
    j["seed"] = std::to_string(seed);
    j["timing_ms"] = timing_ms;
    j["payload"] = std::move(payload);
    return j;
}

} // namespace weavecurv
