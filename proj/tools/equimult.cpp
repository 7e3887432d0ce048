// Command-line front end: parse a surface, analyze or transform it, check
// the locus theorems, and emit JSON reports on stdout.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "equimult/report.hpp"

using namespace equimult;

namespace {

struct Options {
    std::string session_path;
    std::string field = "QQ";
    std::string surface;
    std::string dir;
    std::string center;
    std::string series;
    int degree = 16;
    unsigned h_bound = 4;
    unsigned g_bound = 3;
    std::uint64_t seed = 1;
    unsigned count = 10;
    bool strict = false;
    bool json_only = false;

    bool field_set = false, surface_set = false, dir_set = false, center_set = false,
         series_set = false, degree_set = false, h_set = false, g_set = false,
         seed_set = false, count_set = false, strict_set = false;
};

void merge_session(Options& opt) {
    if (opt.session_path.empty()) return;
    std::ifstream in(opt.session_path);
    if (!in) throw error("cannot open session file: " + opt.session_path);
    std::stringstream buf;
    buf << in.rdbuf();
    auto kv = parse_session(buf.str());
    auto take = [&](const char* key, auto&& apply, bool explicitly_set) {
        auto it = kv.find(key);
        if (it != kv.end() && !explicitly_set) apply(it->second);
    };
    take("field", [&](const std::string& v) { opt.field = v; }, opt.field_set);
    take("surface", [&](const std::string& v) { opt.surface = v; }, opt.surface_set);
    take("dir", [&](const std::string& v) { opt.dir = v; }, opt.dir_set);
    take("center", [&](const std::string& v) { opt.center = v; }, opt.center_set);
    take("series", [&](const std::string& v) { opt.series = v; }, opt.series_set);
    take("degree", [&](const std::string& v) { opt.degree = std::stoi(v); }, opt.degree_set);
    take("h_bound", [&](const std::string& v) { opt.h_bound = std::stoul(v); }, opt.h_set);
    take("g_bound", [&](const std::string& v) { opt.g_bound = std::stoul(v); }, opt.g_set);
    take("seed", [&](const std::string& v) { opt.seed = std::stoull(v); }, opt.seed_set);
    take("count", [&](const std::string& v) { opt.count = std::stoul(v); }, opt.count_set);
    take("strict", [&](const std::string& v) { opt.strict = (v == "true" || v == "1"); },
         opt.strict_set);
}

ordered_json config_json(const Options& opt) {
    ordered_json j;
    j["field"] = opt.field;
    if (!opt.surface.empty()) j["surface"] = opt.surface;
    if (!opt.dir.empty()) j["dir"] = opt.dir;
    if (!opt.center.empty()) j["center"] = opt.center;
    if (!opt.series.empty()) j["series"] = opt.series;
    j["degree"] = opt.degree;
    j["h_bound"] = opt.h_bound;
    j["g_bound"] = opt.g_bound;
    j["seed"] = opt.seed;
    j["count"] = opt.count;
    j["strict"] = opt.strict;
    return j;
}

Surface require_surface(const Options& opt, const FieldSpec& f) {
    if (opt.surface.empty()) throw error("no surface given (flag --surface or session key)");
    MultiSeries poly = parse_poly(opt.surface, f, 3);
    return new_surface(poly, opt.degree);
}

CurveIdeal parse_center(const std::string& text, const FieldSpec& f) {
    auto comma = text.find(',');
    if (comma == std::string::npos)
        throw error("center must be two comma-separated generators, e.g. \"Z,X\"");
    MultiSeries gen1 = parse_poly(text.substr(0, comma), f, 3);
    MultiSeries gen2 = parse_poly(text.substr(comma + 1), f, 3);
    if (!gen1.coeff(ExpVec(0, 0, 1)).is_one() || gen1.degree_in_var(2) != 1)
        throw error("the first center generator must have the form Z + g(X,Y)");
    MultiSeries g = gen1.coeff_in_var(2, 0);
    if (gen2.degree_in_var(2) != 0) throw error("the second center generator must omit Z");
    return make_curve(g, gen2.coeff_in_var(2, 0));
}

int verdict_exit(ReportVerdict v, bool strict) {
    if (v == ReportVerdict::Fail) return 1;
    if (v == ReportVerdict::Inconclusive && strict) return 3;
    return 0;
}

void emit(const ordered_json& doc, const Options& opt, const std::string& human) {
    std::cout << doc.dump(2) << "\n";
    if (!opt.json_only && !human.empty()) std::cerr << human;
}

int cmd_analyze(const Options& opt, bool locus_only) {
    FieldSpec f = parse_field(opt.field);
    Surface s = require_surface(opt, f);
    auto d = discover_locus(s, {opt.h_bound, opt.g_bound}, opt.degree);
    ordered_json result;
    if (!locus_only) result["surface"] = surface_json(s);
    result["locus"] = locus_json(d);
    std::ostringstream human;
    human << "multiplicity " << s.n << ", cone "
          << (s.cone.plane ? "plane" : "not a plane") << ", locus elements "
          << d.elements.size() << "\n";
    emit(make_document(locus_only ? "locus" : "analyze", config_json(opt), result), opt,
         human.str());
    return 0;
}

int cmd_blowup(const Options& opt) {
    FieldSpec f = parse_field(opt.field);
    Surface s = require_surface(opt, f);
    ordered_json entries = ordered_json::array();
    auto run_one = [&](const Direction& u, std::optional<CurveIdeal> center) {
        TransformResult r = center ? monoidal_transform(s, *center, u, opt.degree)
                                   : quadratic_transform(s, u, opt.degree);
        ordered_json e;
        e["record"] = record_json(r.record);
        if (r.surface) {
            e["surface"] = surface_json(*r.surface);
        } else {
            e["surface"] = nullptr;
            e["note"] = "no rational Weierstrass normalization after the drop";
        }
        entries.push_back(e);
    };
    std::optional<CurveIdeal> center;
    if (!opt.center.empty()) {
        CurveIdeal c = parse_center(opt.center, f);
        if (!c.g.is_zero() || !c.h.same_terms(MultiSeries::variable(f, 2, 0)))
            throw error("blowup centers must be normalized to (Z, X)");
        center = c;
    }
    TransformKind kind = center ? TransformKind::Monoidal : TransformKind::Quadratic;
    if (!opt.dir.empty()) {
        Direction u = make_direction(parse_direction_coords(opt.dir, f),
                                     kind == TransformKind::Monoidal);
        run_one(u, center);
    } else {
        for (const auto& [u, m] : enumerate_directions(s, kind)) {
            (void)m;
            run_one(u, center);
        }
    }
    ordered_json result;
    result["transforms"] = entries;
    emit(make_document("blowup", config_json(opt), result), opt,
         "transforms computed: " + std::to_string(entries.size()) + "\n");
    return 0;
}

int cmd_verify(const Options& opt) {
    FieldSpec f = parse_field(opt.field);
    Surface s = require_surface(opt, f);
    ordered_json result;
    int code = 0;
    std::ostringstream human;
    if (!opt.center.empty()) {
        CurveIdeal c = parse_center(opt.center, f);
        if (!c.g.is_zero() || !c.h.same_terms(MultiSeries::variable(f, 2, 0)))
            throw error("monoidal centers must be normalized to (Z, X)");
        auto reports = check_case_a(s, c, {opt.h_bound, opt.g_bound}, opt.degree);
        ordered_json arr = ordered_json::array();
        for (const auto& r : reports) {
            arr.push_back(theorem_report_json(r));
            code = std::max(code, verdict_exit(r.verdict, opt.strict));
            human << "case a @ " << r.direction << ": " << verdict_name(r.verdict) << "\n";
        }
        result["reports"] = arr;
    } else {
        if (opt.dir.empty()) throw error("verify needs --dir (case b) or --center (case a)");
        Direction u = make_direction(parse_direction_coords(opt.dir, f));
        auto r = check_case_b(s, u, {opt.h_bound, opt.g_bound}, opt.degree);
        result["report"] = theorem_report_json(r);
        code = verdict_exit(r.verdict, opt.strict);
        human << "case " << r.theorem_case << " @ " << r.direction << ": "
              << verdict_name(r.verdict) << "\n";
    }
    emit(make_document("verify", config_json(opt), result), opt, human.str());
    return code;
}

int cmd_fuzz(const Options& opt) {
    FieldSpec base = parse_field(opt.field);
    std::vector<FieldSpec> fields;
    if (base.is_rationals()) {
        fields = {FieldSpec::gf(2), FieldSpec::gf(3), FieldSpec::gf(5)};
    } else {
        fields = {base};
    }
    const unsigned ns[3] = {2, 3, 4};
    const Recipe recipes[3] = {Recipe::PlaneCone, Recipe::NotPlaneCone, Recipe::Planted};
    ordered_json instances = ordered_json::array();
    unsigned pass = 0, fail = 0, inconclusive = 0, skipped = 0;
    ordered_json failures = ordered_json::array();
    for (unsigned i = 0; i < opt.count; ++i) {
        const FieldSpec& f = fields[i % fields.size()];
        unsigned n = ns[(i / fields.size()) % 3];
        Recipe rec = recipes[(i / (3 * fields.size())) % 3];
        auto gen = generate_surface(f, n, 6, opt.seed + i, rec, opt.degree);
        ordered_json inst;
        inst["index"] = i;
        inst["field"] = f.str();
        inst["surface"] = to_poly_string(gen.surface.F);
        ordered_json checks = ordered_json::array();
        for (const auto& [u, m] : enumerate_directions(gen.surface, TransformKind::Quadratic)) {
            if (m < gen.surface.n) {
                ++skipped;  // the transform must drop multiplicity there
                continue;
            }
            auto r = check_case_b(gen.surface, u, {opt.h_bound, opt.g_bound}, opt.degree);
            ordered_json c;
            c["direction"] = u.str();
            c["case"] = r.theorem_case;
            c["verdict"] = verdict_name(r.verdict);
            if (r.multiplicity_dropped) c["multiplicity_dropped"] = true;
            checks.push_back(c);
            if (r.verdict == ReportVerdict::Pass) ++pass;
            else if (r.verdict == ReportVerdict::Fail) {
                ++fail;
                failures.push_back(theorem_report_json(r));
            } else {
                ++inconclusive;
            }
        }
        inst["checks"] = checks;
        instances.push_back(inst);
    }
    ordered_json result;
    result["instances"] = instances;
    result["summary"] = ordered_json{{"pass", pass},
                                     {"fail", fail},
                                     {"inconclusive", inconclusive},
                                     {"skipped_drop", skipped}};
    result["failures"] = failures;
    emit(make_document("fuzz", config_json(opt), result), opt,
         "pass " + std::to_string(pass) + ", fail " + std::to_string(fail) +
             ", inconclusive " + std::to_string(inconclusive) + "\n");
    if (fail) return 1;
    if (inconclusive && opt.strict) return 3;
    return 0;
}

int cmd_blowdown(const Options& opt) {
    FieldSpec f = parse_field(opt.field);
    if (opt.series.empty()) throw error("blowdown needs --series (a polynomial in Y)");
    MultiSeries g = parse_poly(opt.series, f, 2);
    auto bd = blowdown_construct(g, opt.degree);
    ordered_json result;
    result["G"] = series_json(g);
    result["lambda"] = bd.lambda;
    result["H"] = series_json(bd.H);
    result["unit"] = series_json(bd.unit);
    result["min_order_case"] = bd.min_order_case;
    emit(make_document("blowdown", config_json(opt), result), opt,
         "H = " + to_poly_string(bd.H) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact blow-up and equimultiple-locus computations for algebroid surfaces"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd, bool with_session = true) {
        if (with_session)
            cmd->add_option("session", opt.session_path, "key=value session file");
        cmd->add_option("--field", opt.field, "QQ or GF:p")
            ->each([&](const std::string&) { opt.field_set = true; });
        cmd->add_option("--surface", opt.surface, "surface expression")
            ->each([&](const std::string&) { opt.surface_set = true; });
        cmd->add_option("--degree", opt.degree, "working degree")
            ->each([&](const std::string&) { opt.degree_set = true; });
        cmd->add_option("--h-bound", opt.h_bound, "curve search bound for h")
            ->each([&](const std::string&) { opt.h_set = true; });
        cmd->add_option("--g-bound", opt.g_bound, "curve search bound for g")
            ->each([&](const std::string&) { opt.g_set = true; });
        cmd->add_option("--dir", opt.dir, "direction a:b:c")
            ->each([&](const std::string&) { opt.dir_set = true; });
        cmd->add_option("--center", opt.center, "monoidal center \"Z,X\"")
            ->each([&](const std::string&) { opt.center_set = true; });
        cmd->add_option("--series", opt.series, "blowdown input series in Y")
            ->each([&](const std::string&) { opt.series_set = true; });
        cmd->add_option("--seed", opt.seed, "random seed")
            ->each([&](const std::string&) { opt.seed_set = true; });
        cmd->add_option("--count", opt.count, "fuzz instance count")
            ->each([&](const std::string&) { opt.count_set = true; });
        cmd->add_flag("--strict", opt.strict, "inconclusive results exit with code 3")
            ->each([&](const std::string&) { opt.strict_set = true; });
        cmd->add_flag("--json", opt.json_only, "suppress the human-readable summary");
    };

    auto* analyze = app.add_subcommand("analyze", "multiplicity, Newton set, cone, locus");
    auto* locus = app.add_subcommand("locus", "equimultiple locus only");
    auto* blowup = app.add_subcommand("blowup", "quadratic or monoidal transforms");
    auto* verify = app.add_subcommand("verify", "check the locus theorem (case a or b)");
    auto* fuzz = app.add_subcommand("fuzz", "seeded random theorem checking");
    auto* blowdown = app.add_subcommand("blowdown", "constructive blowdown series");
    for (auto* c : {analyze, locus, blowup, verify, fuzz, blowdown}) add_common(c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        merge_session(opt);
        if (analyze->parsed()) return cmd_analyze(opt, false);
        if (locus->parsed()) return cmd_analyze(opt, true);
        if (blowup->parsed()) return cmd_blowup(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (fuzz->parsed()) return cmd_fuzz(opt);
        if (blowdown->parsed()) return cmd_blowdown(opt);
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
