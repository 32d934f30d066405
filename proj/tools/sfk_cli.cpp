// Command-line front end: verify, scan and self-test.
#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sfk/report.hpp"

using namespace sfk;

namespace {

struct Overrides {
    std::string config, family, checks;
    std::vector<std::string> params, tols;
    std::optional<double> z_min, z_max;
    std::optional<int> z_count, samples;
    std::optional<std::uint64_t> seed;
    std::string csv, json, table;
};

std::pair<std::string, std::string> key_value(const std::string& s) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got " + s);
    return {s.substr(0, eq), s.substr(eq + 1)};
}

void add_overrides(CLI::App* cmd, Overrides& o) {
    cmd->add_option("-c,--config", o.config, "INI configuration file");
    cmd->add_option("--family", o.family, "family name");
    cmd->add_option("--param", o.params, "family parameter key=value (repeatable)");
    cmd->add_option("--z-min", o.z_min);
    cmd->add_option("--z-max", o.z_max);
    cmd->add_option("--z-count", o.z_count);
    cmd->add_option("--samples", o.samples, "sample points for pointwise checks");
    cmd->add_option("--seed", o.seed);
    cmd->add_option("--checks", o.checks, "comma-separated check names, or all");
    cmd->add_option("--tol", o.tols, "tolerance override key=value (repeatable)");
    cmd->add_option("--csv", o.csv, "write csv here (- for stdout)");
    cmd->add_option("--json", o.json, "write json here (- for stdout)");
    cmd->add_option("--table", o.table, "write the table here (- for stdout)");
}

RunConfig resolve(const Overrides& o) {
    RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (!o.family.empty() && o.family != c.family) {
        c.family = o.family;
        c.params.clear();
    }
    for (const auto& p : o.params) {
        const auto [k, v] = key_value(p);
        c.params[k] = v;
    }
    if (o.z_min) c.grid.min = *o.z_min;
    if (o.z_max) c.grid.max = *o.z_max;
    if (o.z_count) c.grid.count = *o.z_count;
    if (o.samples) c.samples = *o.samples;
    if (o.seed) c.seed = *o.seed;
    if (!o.checks.empty()) {
        c.checks.clear();
        if (o.checks != "all") {
            std::istringstream in(o.checks);
            for (std::string n; std::getline(in, n, ',');)
                if (!n.empty()) c.checks.push_back(n);
        }
    }
    for (const auto& t : o.tols) {
        const auto [k, v] = key_value(t);
        set_tolerance(c.tol, k, std::stod(v));
    }
    if (!o.table.empty() || !o.csv.empty() || !o.json.empty()) c.outputs.clear();
    if (!o.table.empty()) c.outputs.push_back({"table", o.table});
    if (!o.csv.empty()) c.outputs.push_back({"csv", o.csv});
    if (!o.json.empty()) c.outputs.push_back({"json", o.json});
    return c;
}

int self_test(const std::string& csv_path) {
    std::string csv;
    int failed = 0;
    for (const auto& cfg : self_test_configs()) {
        const Report r = run(cfg);
        failed += r.failed;
        std::printf("%-40s %4d passed %4d failed\n", r.family_label.c_str(), r.passed, r.failed);
        for (const auto& c : r.checks)
            if (!c.passed)
                std::printf("  FAIL %s %s residual %.3e tol %.1e %s\n", c.name.c_str(), c.location.c_str(), c.residual,
                            c.tolerance, c.note.c_str());
        const std::string part = emit(r, "csv");
        csv += csv.empty() ? part : part.substr(part.find('\n') + 1);
    }
    if (!csv_path.empty()) {
        if (csv_path == "-")
            std::cout << csv;
        else if (FILE* f = std::fopen(csv_path.c_str(), "wb")) {
            std::fwrite(csv.data(), 1, csv.size(), f);
            std::fclose(f);
        } else {
            throw ConfigError("cannot write " + csv_path);
        }
    }
    std::printf("self-test: %s\n", failed == 0 ? "PASS" : "FAIL");
    return failed == 0 ? 0 : 1;
}

struct Sweep {
    std::string key;
    double start = 0, stop = 0;
    int count = 1;
};

Sweep parse_sweep(const std::string& s) {
    const auto [k, range] = key_value(s);
    Sweep w;
    w.key = k;
    if (std::sscanf(range.c_str(), "%lf:%lf:%d", &w.start, &w.stop, &w.count) != 3 || w.count < 1)
        throw ConfigError("sweep must look like name=start:stop:count, got " + s);
    return w;
}

int scan(const RunConfig& base, const Sweep& w, const std::string& out_path) {
    std::string csv;
    bool ok = true;
    for (int i = 0; i < w.count; ++i) {
        const double v = w.count == 1 ? w.start : w.start + (w.stop - w.start) * i / (w.count - 1);
        RunConfig c = base;
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        c.params[w.key] = buf;
        const Report r = run(c);
        ok = ok && r.all_passed();
        const std::string part = emit(r, "csv");
        csv += csv.empty() ? part : part.substr(part.find('\n') + 1);
        std::fprintf(stderr, "%s: %d passed, %d failed\n", r.family_label.c_str(), r.passed, r.failed);
    }
    if (out_path.empty() || out_path == "-") {
        std::cout << csv;
    } else {
        FILE* f = std::fopen(out_path.c_str(), "wb");
        if (!f) throw ConfigError("cannot write " + out_path);
        std::fwrite(csv.data(), 1, csv.size(), f);
        std::fclose(f);
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verify identities of Kaehler metrics with a Hamiltonian Killing field"};
    app.require_subcommand(0, 1);
    bool top_self_test = false, list = false;
    app.add_flag("--self-test", top_self_test, "run the built-in golden suite");
    app.add_flag("--list", list, "list families and checks");

    Overrides vo, so;
    auto* verify = app.add_subcommand("verify", "run checks for one configuration");
    add_overrides(verify, vo);

    auto* scan_cmd = app.add_subcommand("scan", "repeat a run over a parameter sweep, csv output");
    add_overrides(scan_cmd, so);
    std::string sweep_text, scan_out;
    scan_cmd->add_option("--sweep", sweep_text, "name=start:stop:count")->required();
    scan_cmd->add_option("-o,--out", scan_out, "csv path (default stdout)");

    std::string self_csv;
    auto* st = app.add_subcommand("self-test", "run the built-in golden suite");
    st->add_option("--csv", self_csv, "also write the combined csv here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list) {
            for (const auto& f : family_names()) std::cout << "family " << f << "\n";
            for (const auto& c : check_names()) std::cout << "check  " << c << "\n";
            return 0;
        }
        if (top_self_test || st->parsed()) return self_test(self_csv);
        if (verify->parsed()) {
            const Report r = run(resolve(vo));
            write_outputs(r);
            return r.all_passed() ? 0 : 1;
        }
        if (scan_cmd->parsed()) return scan(resolve(so), parse_sweep(sweep_text), scan_out);
        std::cout << app.help();
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
