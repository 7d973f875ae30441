// Command-line front end: single runs to JSON, figure-grid sweeps to CSV and
// paper-vs-simulation audits to JSON. Output formatting is deterministic:
// numbers are rendered with 17 significant digits, no timestamps unless
// --stamp is given.
//
// Exit codes: 0 ok, 2 usage/domain error, 3 degenerate run, 4 I/O error,
// 5 audit assertion failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qfiport/qfiport.hpp"

namespace {

constexpr const char* kVersion = "qfiport 1.0.0";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') { out += '\\'; out += c; }
        else if (c == '\n') out += "\\n";
        else out += c;
    }
    return out;
}

struct JsonWriter {
    std::ostringstream os;
    int indent = 0;
    bool need_comma = false;

    void pad() { for (int i = 0; i < indent; ++i) os << "  "; }
    void sep() {
        if (need_comma) os << ",";
        os << "\n";
        pad();
        need_comma = true;
    }
    void open(const std::string& key, char brace) {
        sep();
        if (!key.empty()) os << '"' << key << "\": ";
        os << brace;
        ++indent;
        need_comma = false;
    }
    void close(char brace) {
        --indent;
        os << "\n";
        pad();
        os << brace;
        need_comma = true;
    }
    void field(const std::string& key, double v) { sep(); os << '"' << key << "\": " << fmt(v); }
    void field(const std::string& key, const std::string& v) {
        sep();
        os << '"' << key << "\": \"" << json_escape(v) << '"';
    }
    void field(const std::string& key, bool v) {
        sep();
        os << '"' << key << "\": " << (v ? "true" : "false");
    }
};

qfiport::Scheme parse_scheme(const std::string& s) {
    if (s == "ad") return qfiport::Scheme::AD;
    if (s == "a") return qfiport::Scheme::A;
    if (s == "b") return qfiport::Scheme::B;
    if (s == "two-sided") return qfiport::Scheme::TwoSided;
    throw CLI::ValidationError("--scheme", "must be one of ad|a|b|two-sided");
}

qfiport::Placement parse_placement(const std::string& s) {
    if (s == "resource") return qfiport::Placement::OnResource;
    if (s == "pre-correction") return qfiport::Placement::PostBellPreCorrection;
    if (s == "post-correction") return qfiport::Placement::PostBellPostCorrection;
    throw CLI::ValidationError("--placement", "must be resource|pre-correction|post-correction");
}

qfiport::GridSpec parse_grid(const std::string& spec, const std::string& fixed) {
    qfiport::GridSpec grid;
    std::istringstream gs(spec);
    std::string item;
    while (std::getline(gs, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--grid", "expected axis=lo:hi:steps");
        qfiport::GridAxis ax;
        ax.name = item.substr(0, eq);
        std::istringstream vs(item.substr(eq + 1));
        std::string part;
        std::vector<std::string> parts;
        while (std::getline(vs, part, ':')) parts.push_back(part);
        if (parts.size() != 3) throw CLI::ValidationError("--grid", "expected axis=lo:hi:steps");
        ax.lo = std::stod(parts[0]);
        ax.hi = std::stod(parts[1]);
        ax.steps = std::stoi(parts[2]);
        grid.axes.push_back(ax);
    }
    if (!fixed.empty()) {
        std::istringstream fs(fixed);
        while (std::getline(fs, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw CLI::ValidationError("--fixed", "expected name=value");
            grid.fixed[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        }
    }
    return grid;
}

int write_file(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return 0;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open " << path << " for writing\n";
        return 4;
    }
    out << content;
    return out.good() ? 0 : 4;
}

std::string maybe_stamp(bool stamp) {
    if (!stamp) return "";
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    return std::to_string(std::chrono::duration_cast<std::chrono::seconds>(now).count());
}

struct RunFlags {
    std::string scheme = "ad";
    double theta = M_PI / 2.0, phi = 0.0;
    double gamma = 0.0, gamma2 = -1.0;
    double p = 0.0, p1 = -1.0, p2 = -1.0;
    double pr = 0.0, pr1 = -1.0, pr2 = -1.0;
    std::string pr_policy = "fixed";
    std::string placement = "resource";
    std::string out;
    bool deg = false;
    bool stamp = false;
};

qfiport::SchemeConfig build_config(const RunFlags& f) {
    qfiport::SchemeConfig cfg;
    cfg.scheme = parse_scheme(f.scheme);
    const double ang = f.deg ? M_PI / 180.0 : 1.0;
    cfg.theta = f.theta * ang;
    cfg.phi = f.phi * ang;
    cfg.gamma = f.gamma;
    cfg.gamma1 = f.gamma;
    cfg.gamma2 = (f.gamma2 >= 0.0) ? f.gamma2 : f.gamma;
    cfg.p = f.p;
    cfg.p1 = (f.p1 >= 0.0) ? f.p1 : f.p;
    cfg.p2 = (f.p2 >= 0.0) ? f.p2 : f.p;
    cfg.pr = f.pr;
    cfg.pr1 = (f.pr1 >= 0.0) ? f.pr1 : f.pr;
    cfg.pr2 = (f.pr2 >= 0.0) ? f.pr2 : f.pr;
    if (f.pr_policy == "fixed") cfg.pr_policy = qfiport::PrPolicy::Fixed;
    else if (f.pr_policy == "paper-opt") cfg.pr_policy = qfiport::PrPolicy::PaperOptimal;
    else if (f.pr_policy == "numeric-opt") cfg.pr_policy = qfiport::PrPolicy::NumericOptimal;
    else throw CLI::ValidationError("--pr-policy", "must be fixed|paper-opt|numeric-opt");
    cfg.placement = parse_placement(f.placement);
    return cfg;
}

double paper_success_of(const qfiport::SchemeConfig& cfg) {
    using namespace qfiport;
    switch (cfg.scheme) {
        case Scheme::AD: return 1.0;
        case Scheme::A:  return formulas::scheme_a_probabilities(cfg.gamma).p_qfi;
        case Scheme::B:  return formulas::scheme_b_probabilities(cfg.gamma, cfg.p).p_qfi;
        case Scheme::TwoSided:
            return formulas::scheme_b_probabilities(cfg.gamma1, cfg.p1).p_qfi *
                   formulas::scheme_b_probabilities(cfg.gamma2, cfg.p2).p_qfi;
    }
    return 1.0;
}

int cmd_run(const RunFlags& f) {
    qfiport::SchemeConfig cfg = build_config(f);
    qfiport::SchemeResult res = qfiport::run_scheme(cfg);
    const auto paper = qfiport::detail::paper_eval(cfg, res.pr_resolved);
    const double paper_success = paper_success_of(cfg);

    JsonWriter w;
    w.os << "{";
    w.indent = 1;
    w.field("tool", std::string(kVersion));
    w.field("format", std::string("deterministic; doubles rendered with 17 significant digits"));
    if (f.stamp) w.field("stamp", maybe_stamp(true));
    w.open("config", '{');
    w.field("scheme", f.scheme);
    w.field("theta", cfg.theta);
    w.field("phi", cfg.phi);
    w.field("gamma", cfg.gamma);
    w.field("gamma1", cfg.gamma1);
    w.field("gamma2", cfg.gamma2);
    w.field("p", cfg.p);
    w.field("p1", cfg.p1);
    w.field("p2", cfg.p2);
    w.field("pr", cfg.pr);
    w.field("pr1", cfg.pr1);
    w.field("pr2", cfg.pr2);
    w.field("pr_policy", f.pr_policy);
    w.field("pr_resolved", res.pr_resolved);
    w.field("placement", f.placement);
    w.close('}');
    w.open("simulated", '{');
    w.open("bloch", '{');
    w.field("rx", res.bloch.rx);
    w.field("ry", res.bloch.ry);
    w.field("rz", res.bloch.rz);
    w.close('}');
    w.field("qfi", res.qfi_simulated);
    w.field("success_probability", res.success_probability);
    w.close('}');
    w.open("paper", '{');
    w.open("bloch", '{');
    w.field("rx", paper.bloch.rx);
    w.field("ry", paper.bloch.ry);
    w.field("rz", paper.bloch.rz);
    w.close('}');
    w.field("qfi", res.qfi_paper.value_or(0.0));
    w.field("success_probability", paper_success);
    w.close('}');
    w.open("deviations", '{');
    w.field("bloch_rx", std::abs(res.bloch.rx - paper.bloch.rx));
    w.field("bloch_ry", std::abs(res.bloch.ry - paper.bloch.ry));
    w.field("bloch_rz", std::abs(res.bloch.rz - paper.bloch.rz));
    w.field("qfi", std::abs(res.qfi_simulated - res.qfi_paper.value_or(0.0)));
    w.close('}');
    if (!res.notes.empty()) {
        std::string joined;
        for (const auto& n : res.notes) joined += (joined.empty() ? "" : "; ") + n;
        w.field("notes", joined);
    }
    w.os << "\n}\n";
    return write_file(f.out, w.os.str());
}

struct SweepFlags {
    std::string scheme = "a";
    std::string grid;
    std::string fixed;
    std::string columns;
    std::string out;
    bool stamp = false;
};

int cmd_sweep(const SweepFlags& f) {
    qfiport::GridSpec grid = parse_grid(f.grid, f.fixed);
    std::vector<std::string> cols;
    std::istringstream cs(f.columns);
    std::string item;
    while (std::getline(cs, item, ',')) cols.push_back(item);
    qfiport::Table t = qfiport::sweep(parse_scheme(f.scheme), grid, cols);

    std::ostringstream os;
    if (f.stamp) os << "# stamp," << maybe_stamp(true) << "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        os << (c ? "," : "") << t.columns[c];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << fmt(row[c]);
        os << "\n";
    }
    return write_file(f.out, os.str());
}

struct AuditFlags {
    std::string scheme = "b";
    std::string placement = "resource";
    std::string grid;
    std::string fixed;
    std::string asserts;
    std::string out;
    bool stamp = false;
};

int cmd_audit(const AuditFlags& f) {
    qfiport::GridSpec grid = parse_grid(f.grid, f.fixed);
    std::map<std::string, double> tolerances;
    if (!f.asserts.empty()) {
        std::istringstream as(f.asserts);
        std::string item;
        while (std::getline(as, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("--assert", "expected QUANTITY=TOL");
            tolerances[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        }
    }
    qfiport::DiscrepancyReport rep = qfiport::compare_paper_vs_sim(
        parse_scheme(f.scheme), parse_placement(f.placement), grid, tolerances);

    JsonWriter w;
    w.os << "{";
    w.indent = 1;
    w.field("tool", std::string(kVersion));
    if (f.stamp) w.field("stamp", maybe_stamp(true));
    w.field("scheme", rep.scheme);
    w.field("placement", rep.placement);
    w.open("grid", '[');
    for (const auto& ax : rep.grid.axes) {
        w.open("", '{');
        w.field("name", ax.name);
        w.field("lo", ax.lo);
        w.field("hi", ax.hi);
        w.field("steps", double(ax.steps));
        w.close('}');
    }
    w.close(']');
    w.open("fixed", '{');
    for (const auto& [k, v] : rep.grid.fixed) w.field(k, v);
    w.close('}');
    w.open("records", '[');
    for (const auto& r : rep.records) {
        w.open("", '{');
        w.field("quantity", r.quantity);
        w.field("max_abs_dev", r.max_abs_dev);
        w.field("mean_abs_dev", r.mean_abs_dev);
        w.field("points", double(r.count));
        w.open("argmax_point", '[');
        for (double v : r.argmax_point) { w.sep(); w.os << fmt(v); }
        w.close(']');
        w.close('}');
    }
    w.close(']');
    w.open("asserted", '{');
    for (const auto& [k, v] : rep.asserted_tolerances) {
        w.open(k, '{');
        w.field("tolerance", v);
        w.field("passed", rep.passed.at(k));
        w.close('}');
    }
    w.close('}');
    w.field("all_passed", rep.all_passed);
    if (!rep.notes.empty()) {
        std::string joined;
        for (const auto& n : rep.notes) joined += (joined.empty() ? "" : "; ") + n;
        w.field("notes", joined);
    }
    w.os << "\n}\n";
    const int rc = write_file(f.out, w.os.str());
    if (rc != 0) return rc;
    return rep.all_passed ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Teleported-QFI simulator and verification tool"};
    app.require_subcommand(1);

    RunFlags rf;
    CLI::App* run = app.add_subcommand("run", "single protocol run, JSON record");
    run->add_option("--scheme", rf.scheme, "ad|a|b|two-sided");
    run->add_option("--theta", rf.theta, "input polar angle (radians)");
    run->add_option("--phi", rf.phi, "encoded phase (radians)");
    run->add_option("--gamma", rf.gamma, "damping strength (Bob / qubit 1)");
    run->add_option("--gamma2", rf.gamma2, "damping strength for qubit 2 (two-sided)");
    run->add_option("--p", rf.p, "prior partial-measurement strength");
    run->add_option("--p1", rf.p1, "prior strength, qubit 1 (two-sided)");
    run->add_option("--p2", rf.p2, "prior strength, qubit 2 (two-sided)");
    run->add_option("--pr", rf.pr, "post strength");
    run->add_option("--pr1", rf.pr1, "post strength, qubit 1 (two-sided)");
    run->add_option("--pr2", rf.pr2, "post strength, qubit 2 (two-sided)");
    run->add_option("--pr-policy", rf.pr_policy, "fixed|paper-opt|numeric-opt");
    run->add_option("--placement", rf.placement, "resource|pre-correction|post-correction");
    run->add_option("--out", rf.out, "output path (default stdout)");
    run->add_flag("--deg", rf.deg, "interpret angles in degrees");
    run->add_flag("--stamp", rf.stamp, "include a timestamp field");

    SweepFlags sf;
    CLI::App* sw = app.add_subcommand("sweep", "grid sweep, CSV output");
    sw->add_option("--scheme", sf.scheme, "ad|a|b|two-sided");
    sw->add_option("--grid", sf.grid, "axis=lo:hi:steps[,axis=...]")->required();
    sw->add_option("--fixed", sf.fixed, "name=value[,name=value...]");
    sw->add_option("--columns", sf.columns, "comma-separated output columns")->required();
    sw->add_option("--out", sf.out, "output path (default stdout)");
    sw->add_flag("--stamp", sf.stamp, "include a timestamp comment");

    AuditFlags af;
    CLI::App* au = app.add_subcommand("audit", "paper-vs-simulation report, JSON output");
    au->add_option("--scheme", af.scheme, "ad|a|b|two-sided");
    au->add_option("--placement", af.placement, "resource|pre-correction|post-correction");
    au->add_option("--grid", af.grid, "axis=lo:hi:steps[,axis=...]")->required();
    au->add_option("--fixed", af.fixed, "name=value[,name=value...]");
    au->add_option("--assert", af.asserts, "QUANTITY=TOL[,QUANTITY=TOL...]");
    au->add_option("--out", af.out, "output path (default stdout)");
    au->add_flag("--stamp", af.stamp, "include a timestamp field");

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(rf);
        if (sw->parsed()) return cmd_sweep(sf);
        if (au->parsed()) return cmd_audit(af);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const qfiport::degenerate_run_error& e) {
        std::cerr << "degenerate run: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
