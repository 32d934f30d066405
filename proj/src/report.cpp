#include "sfk/report.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"
#include "sfk/parallel.hpp"

namespace sfk {

namespace {

using nlohmann::json;

enum class Where { Z, Points, AllPoints };

struct CheckInfo {
    const char* name;
    Where where;
    CheckKind kind;
};

const std::vector<CheckInfo>& catalog() {
    static const std::vector<CheckInfo> c{
        {"closed_forms", Where::Z, CheckKind::ClosedForm},
        {"area_growth", Where::Z, CheckKind::IntegralEvolution},
        {"chi_evolution", Where::Z, CheckKind::IntegralEvolution},
        {"cgb_evolution", Where::Z, CheckKind::IntegralEvolution},
        {"area_linearity", Where::Z, CheckKind::IntegralEvolution},
        {"inequalities", Where::Z, CheckKind::Inequality},
        {"ricci_flat_relation", Where::Z, CheckKind::ClosedForm},
        {"pointwise_lemmas", Where::Points, CheckKind::PointwiseForm},
        {"toda_global", Where::Points, CheckKind::PointwiseForm},
        {"transgression_steps", Where::Points, CheckKind::PointwiseForm},
        {"p_ric", Where::Points, CheckKind::PointwiseForm},
        {"lebrun_pde", Where::AllPoints, CheckKind::PointwiseForm},
    };
    return c;
}

const CheckInfo& info(const std::string& name) {
    for (const auto& c : catalog())
        if (name == c.name) return c;
    throw ConfigError("unknown check: " + name);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        const auto a = cur.find_first_not_of(" \t"), b = cur.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(cur.substr(a, b - a + 1));
    }
    return out;
}

double as_double(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const double d = std::stod(v, &used);
        if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(key + " is not a number: " + v);
}

bool ricci_flat(const GeometryBundle& b, const Point& p) {
    return curvature_at(b.metric, p, b.orientation).ric_norm_sq < 1e-10;
}

bool applies(const std::string& name, const GeometryBundle& b, const std::vector<Point>& pts) {
    const Where w = info(name).where;
    if (w == Where::Z && !b.has_reduction()) return false;
    if (name == "ricci_flat_relation") return !pts.empty() && ricci_flat(b, pts.front());
    if (name == "lebrun_pde") return b.isothermal.has_value();
    if (name == "toda_global") return b.has_reduction() && static_cast<bool>(b.project);
    return true;
}

IdentityCheck error_record(const std::string& name, const GeometryBundle& b, const std::string& loc,
                           const CheckSettings& s, const std::string& what) {
    const CheckKind kind = info(name).kind;
    const double tol = kind == CheckKind::IntegralEvolution ? s.tol.richardson
                       : kind == CheckKind::PointwiseForm   ? s.tol.pointwise
                                                            : s.tol.closed_form;
    IdentityCheck c = make_check(name, kind, b, loc, 0.0, 0.0, std::numeric_limits<double>::infinity(), tol, "");
    c.note = "error: " + what;
    return c;
}

std::string num17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string num6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

json num_json(double v) {
    if (std::isfinite(v)) return v;
    return num17(v);
}

double num_from(const json& j) {
    if (j.is_number()) return j.get<double>();
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
}

json tolerances_json(const Tolerances& t) {
    return {{"closed_form", t.closed_form},
            {"richardson", t.richardson},
            {"pointwise", t.pointwise},
            {"transgression_d", t.transgression_d},
            {"equality", t.equality}};
}

json config_json(const RunConfig& c) {
    json outs = json::array();
    for (const auto& o : c.outputs) outs.push_back({{"format", o.format}, {"path", o.path}});
    return {{"family", c.family},
            {"params", c.params},
            {"grid", {{"min", c.grid.min}, {"max", c.grid.max}, {"count", c.grid.count}}},
            {"samples", c.samples},
            {"seed", c.seed},
            {"checks", c.checks},
            {"tolerances", tolerances_json(c.tol)},
            {"outputs", outs}};
}

RunConfig config_from(const json& j) {
    RunConfig c;
    c.family = j.at("family").get<std::string>();
    c.params = j.at("params").get<std::map<std::string, std::string>>();
    c.grid.min = j.at("grid").at("min").get<double>();
    c.grid.max = j.at("grid").at("max").get<double>();
    c.grid.count = j.at("grid").at("count").get<int>();
    c.samples = j.at("samples").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.checks = j.at("checks").get<std::vector<std::string>>();
    for (const auto& [k, v] : j.at("tolerances").items()) set_tolerance(c.tol, k, v.get<double>());
    for (const auto& o : j.at("outputs")) c.outputs.push_back({o.at("format"), o.at("path")});
    return c;
}

std::string table(const Report& r) {
    std::ostringstream out;
    const auto& c = r.config;
    out << "# " << r.version << "  family " << r.family_label << "  z in [" << num6(c.grid.min) << ", "
        << num6(c.grid.max) << "] x " << c.grid.count << "  samples " << c.samples << "  seed " << c.seed << "\n";
    std::size_t wn = 5, wf = 6, wl = 8;
    for (const auto& k : r.checks) {
        wn = std::max(wn, k.name.size());
        wf = std::max(wf, k.family.size());
        wl = std::max(wl, k.location.size());
    }
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-*s  %-*s  %-*s  %18s  %18s  %10s  %8s  %s\n", int(wn), "check", int(wf),
                  "family", int(wl), "location", "lhs", "rhs", "residual", "tol", "result");
    out << buf;
    for (const auto& k : r.checks) {
        std::snprintf(buf, sizeof buf, "%-*s  %-*s  %-*s  %18.10g  %18.10g  %10.3e  %8.1e  %s", int(wn),
                      k.name.c_str(), int(wf), k.family.c_str(), int(wl), k.location.c_str(), k.lhs, k.rhs,
                      k.residual, k.tolerance, k.passed ? "PASS" : "FAIL");
        out << buf;
        if (!k.note.empty()) out << "  " << k.note;
        out << "\n";
    }
    if (!r.invariants.empty()) {
        out << "# reduction invariants\n";
        for (const auto& v : r.invariants) {
            std::snprintf(buf, sizeof buf, "#   z=%-10.6g vol2=%-18.12g chi_g=%-18.12g e_g=%.12g\n", v.z, v.vol2,
                          v.chi_g, v.e_g);
            out << buf;
        }
    }
    std::snprintf(buf, sizeof buf, "# %d passed, %d failed, %zu checks, %.2f s\n", r.passed, r.failed,
                  r.checks.size(), r.wall_seconds);
    out << buf;
    return out.str();
}

}  // namespace

std::vector<double> ZGrid::values() const {
    if (count < 1) throw ConfigError("z-grid count must be at least 1");
    if (count == 1) return {min};
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = min + (max - min) * i / (count - 1);
    return out;
}

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& c : catalog()) n.emplace_back(c.name);
        return n;
    }();
    return names;
}

void set_tolerance(Tolerances& tol, const std::string& key, double value) {
    if (!(value > 0.0)) throw ConfigError("tolerance " + key + " must be positive");
    if (key == "closed_form")
        tol.closed_form = value;
    else if (key == "richardson")
        tol.richardson = value;
    else if (key == "pointwise")
        tol.pointwise = value;
    else if (key == "transgression_d")
        tol.transgression_d = value;
    else if (key == "equality")
        tol.equality = value;
    else
        throw ConfigError("unknown tolerance: " + key);
}

RunConfig parse_config(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    RunConfig c;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) throw ConfigError("config key outside a section: " + section);
        auto get = [&](const std::string& key) { return body.get<std::string>(key); };
        if (section == "family") {
            for (const auto& [k, v] : body) {
                if (k == "name")
                    c.family = v.data();
                else
                    c.params[k] = v.data();
            }
        } else if (section == "grid") {
            for (const auto& [k, v] : body) {
                if (k == "z_min")
                    c.grid.min = as_double(k, v.data());
                else if (k == "z_max")
                    c.grid.max = as_double(k, v.data());
                else if (k == "z_count")
                    c.grid.count = static_cast<int>(as_double(k, v.data()));
                else
                    throw ConfigError("unknown grid key: " + k);
            }
        } else if (section == "samples") {
            for (const auto& [k, v] : body) {
                if (k == "count")
                    c.samples = static_cast<int>(as_double(k, v.data()));
                else if (k == "seed")
                    c.seed = static_cast<std::uint64_t>(as_double(k, v.data()));
                else
                    throw ConfigError("unknown samples key: " + k);
            }
        } else if (section == "checks") {
            const std::string sel = get("select");
            c.checks = sel == "all" ? std::vector<std::string>{} : split_list(sel);
        } else if (section == "tolerances") {
            for (const auto& [k, v] : body) set_tolerance(c.tol, k, as_double(k, v.data()));
        } else if (section == "output") {
            for (const auto& [k, v] : body) {
                if (k != "table" && k != "csv" && k != "json") throw ConfigError("unknown output format: " + k);
                c.outputs.push_back({k, v.data()});
            }
        } else {
            throw ConfigError("unknown config section: " + section);
        }
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate(const RunConfig& cfg, const GeometryBundle& b) {
    for (const auto& n : cfg.checks) info(n);
    if (cfg.samples < 0) throw ConfigError("sample count must be non-negative");
    if (cfg.grid.count < 1) throw ConfigError("z-grid count must be at least 1");
    if (cfg.grid.min > cfg.grid.max) throw ConfigError("z-grid min exceeds max");
    if (!b.has_reduction()) return;
    for (double z : cfg.grid.values())
        if (!b.z_is_regular(z))
            throw ConfigError("z=" + num6(z) + " is outside the regular range of " + family_label(b));
}

Report run(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const GeometryBundle b = make_family(cfg.family, cfg.params);
    validate(cfg, b);

    CheckSettings s;
    s.tol = cfg.tol;
    if (cfg.grid.max > cfg.grid.min) s.z_range = cfg.grid.max - cfg.grid.min;

    std::mt19937_64 rng(cfg.seed);
    std::vector<Point> pts;
    if (b.sample)
        for (int i = 0; i < cfg.samples; ++i) pts.push_back(b.sample(rng));
    const std::vector<double> zs = b.has_reduction() ? cfg.grid.values() : std::vector<double>{};

    const bool automatic = cfg.checks.empty();
    std::vector<std::string> selected;
    for (const auto& n : check_names()) {
        const bool named = std::find(cfg.checks.begin(), cfg.checks.end(), n) != cfg.checks.end();
        if (automatic ? applies(n, b, pts) : named) selected.push_back(n);
    }

    using Task = std::function<std::vector<IdentityCheck>()>;
    std::vector<Task> tasks;
    for (const auto& n : selected) {
        auto guard = [&b, s, n](std::string loc, std::function<std::vector<IdentityCheck>()> f) -> Task {
            return [&b, s, n, loc, f] {
                try {
                    return f();
                } catch (const std::exception& e) {
                    return std::vector<IdentityCheck>{error_record(n, b, loc, s, e.what())};
                }
            };
        };
        const Where w = info(n).where;
        if (w == Where::Z) {
            if (zs.empty()) tasks.push_back(guard("-", [] () -> std::vector<IdentityCheck> {
                throw UnsupportedFamily("family has no reduction");
            }));
            for (double z : zs) {
                std::function<std::vector<IdentityCheck>()> f;
                if (n == "closed_forms") f = [&b, z, s] { return check_closed_forms(b, z, s); };
                if (n == "area_growth") f = [&b, z, s] { return std::vector{check_area_growth(b, z, s)}; };
                if (n == "chi_evolution") f = [&b, z, s] { return check_chi_evolution(b, z, s); };
                if (n == "cgb_evolution") f = [&b, z, s] { return std::vector{check_cgb_evolution(b, z, s)}; };
                if (n == "area_linearity") f = [&b, z, s] { return std::vector{check_area_linearity(b, z, s)}; };
                if (n == "inequalities") f = [&b, z, s] { return scan_basic_inequalities(b, {z}, s); };
                if (n == "ricci_flat_relation")
                    f = [&b, z, s] { return std::vector{check_ricci_flat_relation(b, z, s)}; };
                tasks.push_back(guard(z_location(z), f));
            }
        } else if (w == Where::Points) {
            for (const Point& p : pts) {
                std::function<std::vector<IdentityCheck>()> f;
                if (n == "pointwise_lemmas") f = [&b, p, s] { return check_pointwise_lemmas(b, p, s); };
                if (n == "toda_global") f = [&b, p, s] { return std::vector{check_toda_global(b, p, s)}; };
                if (n == "transgression_steps")
                    f = [&b, p, s] { return std::vector{check_transgression_steps(b, p, s)}; };
                if (n == "p_ric") f = [&b, p, s] { return std::vector{check_p_ric(b, p, s)}; };
                tasks.push_back(guard(point_location(p), f));
            }
        } else {
            tasks.push_back(guard("points", [&b, pts, s] { return check_lebrun_pde(b, pts, s); }));
        }
    }

    const auto results =
        parallel_map<std::vector<IdentityCheck>>(tasks.size(), [&tasks](std::size_t i) { return tasks[i](); });

    Report r;
    r.config = cfg;
    r.family_label = family_label(b);
    for (const auto& v : results)
        for (const auto& c : v) {
            r.checks.push_back(c);
            (c.passed ? r.passed : r.failed) += 1;
        }

    r.invariants = parallel_map<ZInvariants>(zs.size(), [&](std::size_t i) {
        ZInvariants v;
        v.z = zs[i];
        try {
            v.vol2 = reduced_area(b, v.z);
            v.chi_g = chi_g(b, v.z);
            v.e_g = e_g(b, v.z);
        } catch (const std::exception&) {
            v.vol2 = v.chi_g = v.e_g = std::numeric_limits<double>::quiet_NaN();
        }
        return v;
    });
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::string emit(const Report& r, const std::string& format) {
    if (format == "table") return table(r);
    if (format == "csv") {
        std::string out = "check,family,z_or_point,lhs,rhs,residual,tolerance,pass\n";
        for (const auto& c : r.checks)
            out += csv_field(c.name) + "," + csv_field(c.family) + "," + csv_field(c.location) + "," + num17(c.lhs) +
                   "," + num17(c.rhs) + "," + num17(c.residual) + "," + num17(c.tolerance) + "," +
                   (c.passed ? "true" : "false") + "\n";
        return out;
    }
    if (format == "json") {
        json checks = json::array();
        for (const auto& c : r.checks)
            checks.push_back({{"name", c.name},
                              {"kind", to_string(c.kind)},
                              {"family", c.family},
                              {"location", c.location},
                              {"lhs", num_json(c.lhs)},
                              {"rhs", num_json(c.rhs)},
                              {"residual", num_json(c.residual)},
                              {"tolerance", c.tolerance},
                              {"passed", c.passed},
                              {"provenance", c.provenance},
                              {"note", c.note}});
        json inv = json::array();
        for (const auto& v : r.invariants)
            inv.push_back({{"z", v.z}, {"vol2", num_json(v.vol2)}, {"chi_g", num_json(v.chi_g)}, {"e_g", num_json(v.e_g)}});
        const json j = {{"version", r.version},
                        {"config", config_json(r.config)},
                        {"family_label", r.family_label},
                        {"checks", checks},
                        {"invariants", inv},
                        {"summary", {{"passed", r.passed}, {"failed", r.failed}, {"total", r.checks.size()}}}};
        return j.dump(2) + "\n";
    }
    throw ConfigError("unknown output format: " + format);
}

Report report_from_json(const std::string& text) {
    const json j = json::parse(text);
    Report r;
    r.version = j.at("version").get<std::string>();
    r.config = config_from(j.at("config"));
    r.family_label = j.at("family_label").get<std::string>();
    for (const auto& c : j.at("checks")) {
        IdentityCheck k;
        k.name = c.at("name");
        k.kind = check_kind_from(c.at("kind"));
        k.family = c.at("family");
        k.location = c.at("location");
        k.lhs = num_from(c.at("lhs"));
        k.rhs = num_from(c.at("rhs"));
        k.residual = num_from(c.at("residual"));
        k.tolerance = c.at("tolerance");
        k.passed = c.at("passed");
        k.provenance = c.at("provenance");
        k.note = c.at("note");
        r.checks.push_back(k);
    }
    for (const auto& v : j.at("invariants"))
        r.invariants.push_back({v.at("z").get<double>(), num_from(v.at("vol2")), num_from(v.at("chi_g")),
                                num_from(v.at("e_g"))});
    r.passed = j.at("summary").at("passed");
    r.failed = j.at("summary").at("failed");
    return r;
}

void write_outputs(const Report& r) {
    std::vector<OutputSpec> outs = r.config.outputs;
    if (outs.empty()) outs.push_back({"table", "-"});
    for (const auto& o : outs) {
        const std::string text = emit(r, o.format);
        if (o.path == "-") {
            std::cout << text;
            continue;
        }
        std::ofstream f(o.path, std::ios::binary);
        if (!f) throw ConfigError("cannot write " + o.path);
        f << text;
        if (!f) throw ConfigError("cannot write " + o.path);
    }
}

std::vector<RunConfig> self_test_configs() {
    const std::vector<std::string> tables{"closed_forms", "area_growth", "chi_evolution", "cgb_evolution",
                                          "area_linearity", "inequalities"};
    std::vector<RunConfig> out;
    RunConfig flat;
    flat.family = "flat_c2";
    flat.params = {{"alpha", "1"}, {"beta", "1"}};
    flat.grid = {-3.0, -0.5, 6};
    flat.checks = tables;
    out.push_back(flat);
    for (int k : {1, 2, 3})
        for (const char* m : {"0.5", "1"}) {
            RunConfig c;
            c.family = "lebrun_instanton";
            c.params = {{"k", std::to_string(k)}, {"m", m}};
            c.grid = {-3.0, -0.2, 5};
            c.checks = tables;
            out.push_back(c);
        }
    return out;
}

}  // namespace sfk
