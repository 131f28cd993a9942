#include "pfreq/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"
#include "pfreq/bounds.hpp"
#include "pfreq/convex.hpp"
#include "pfreq/dual.hpp"
#include "pfreq/elliptic.hpp"
#include "pfreq/errors.hpp"
#include "pfreq/onedim.hpp"
#include "pfreq/parse.hpp"
#include "pfreq/primal.hpp"

namespace pfreq {

using Record = nlohmann::ordered_json;

namespace {

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

// JSON lines are written as they come so a crash keeps earlier results; CSV
// needs the full column set and is written at the end.
class Sink {
public:
    Sink(std::ostream& os, std::string format) : os_(os), format_(std::move(format)) {}
    ~Sink() { finish(); }

    void add(Record r) {
        if (format_ == "json") {
            os_ << r.dump() << '\n';
            os_.flush();
        } else {
            rows_.push_back(std::move(r));
        }
    }

    void finish() {
        if (format_ != "csv" || done_) return;
        done_ = true;
        std::vector<std::string> cols;
        for (const auto& r : rows_)
            for (const auto& [k, v] : r.items())
                if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
        for (std::size_t c = 0; c < cols.size(); ++c) os_ << (c ? "," : "") << cols[c];
        os_ << '\n';
        for (const auto& r : rows_) {
            for (std::size_t c = 0; c < cols.size(); ++c) {
                if (c) os_ << ',';
                if (r.contains(cols[c])) os_ << cell(r[cols[c]]);
            }
            os_ << '\n';
        }
        os_.flush();
    }

private:
    static std::string cell(const Record& v) {
        if (v.is_null()) return "";
        if (v.is_string()) {
            const std::string s = v.get<std::string>();
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string q = "\"";
            for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return q + "\"";
        }
        if (v.is_array()) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + cell(v[i]);
            return s;
        }
        return v.dump();
    }

    std::ostream& os_;
    std::string format_;
    std::vector<Record> rows_;
    bool done_ = false;
};

Record num(double x) { return std::isfinite(x) ? Record(x) : Record(nullptr); }

Record header(const RunConfig& cfg, const std::string& label, std::size_t iq, std::size_t ih, double h) {
    Record r;
    r["command"] = cfg.command;
    r["domain"] = label;
    r["q"] = cfg.q[iq];
    r["q_text"] = cfg.q_text[iq];
    r["h"] = h;
    r["h_text"] = ih < cfg.h_text.size() ? cfg.h_text[ih] : format_number(h);
    return r;
}

struct GridEntry {
    DomainPtr dom;
    double h;
};

// Every domain is built before any solve so a bad literal or file fails fast.
std::vector<GridEntry> build_domains(const RunConfig& cfg) {
    std::vector<GridEntry> out;
    try {
        for (double h : cfg.h) {
            DomainPtr d = parse_domain_spec(cfg.domain, h);
            if (std::abs(d->h() - h) > 1e-12 * h) {
                // A domain file fixes its own spacing.
                if (cfg.h_given)
                    throw ConfigError("domain file fixes h = " + format_number(d->h()) + "; drop --h");
                out.push_back({d, d->h()});
                return out;
            }
            out.push_back({d, h});
        }
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return out;
}

std::string file_token(const std::string& s) {
    std::string t;
    for (char ch : s) t += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.') ? ch : '_';
    return t;
}

}  // namespace

void validate(RunConfig& cfg) {
    static const std::vector<std::string> commands{"solve", "dual", "bounds", "constants", "conjugate-check", "report"};
    if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end())
        throw ConfigError("unknown command '" + cfg.command + "'");
    if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("--format must be json or csv");
    if (cfg.q.empty()) throw ConfigError("no q values");
    const bool open = cfg.command == "conjugate-check";
    for (double q : cfg.q) {
        if (open ? !(q > 1.0 && q < 2.0) : !(q >= 1.0 && q <= 2.0))
            throw ConfigError("q = " + format_number(q) + (open ? " outside (1,2)" : " outside [1,2]"));
    }
    if (cfg.h.empty()) throw ConfigError("no h values");
    for (std::size_t i = 0; i < cfg.h.size(); ++i) {
        if (!(cfg.h[i] > 0.0)) throw ConfigError("h values must be positive");
        if (i > 0 && !(cfg.h[i] < cfg.h[i - 1])) throw ConfigError("h values must be strictly decreasing");
    }
    if (!(cfg.tol >= 0.0)) throw ConfigError("--tol must be non-negative");
    if (!(cfg.bound_tol >= 0.0)) throw ConfigError("--bound-tol must be non-negative");
    if (cfg.samples < 1) throw ConfigError("--samples must be positive");
}

RunConfig parse_args(int argc, const char* const* argv, std::string* help) {
    CLI::App app{"Generalized principal frequencies on grid domains"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // -h would clash with --h
    RunConfig cfg;
    std::string q_list, q_grid, h_list, tol_text, bound_tol_text;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--domain", cfg.domain, "disk:r=R | rect:w=W,h=H | poly:x,y;... | file:PATH");
        sub->add_option("--q", q_list, "comma-separated q values, decimals or a/b");
        sub->add_option("--q-grid", q_grid, "a:b:step, endpoints included");
        sub->add_option("--h", h_list, "comma-separated grid spacings, decreasing (default 1/64)");
        sub->add_option("--tol", tol_text, "solver tolerance (default per solver)");
        sub->add_option("--format", cfg.format, "json or csv");
        sub->add_option("--out", cfg.out, "output file (default stdout)");
        sub->add_option("--seed", cfg.seed, "seed for randomized checks");
    };
    const std::pair<const char*, const char*> commands[] = {
        {"solve", "lambda1 and solver diagnostics per (q, h)"},
        {"dual", "optimal dual pair, feasibility and duality gap per (q, h)"},
        {"bounds", "geometric lower/upper bounds against the computed lambda1"},
        {"constants", "pi_{2,q} and the interval value over a q grid"},
        {"conjugate-check", "closed-form conjugate of F_q against brute force"},
        {"report", "solve, dual and bounds together, with Richardson extrapolation"}};
    for (const auto& [name, about] : commands) {
        CLI::App* sub = app.add_subcommand(name, about);
        sub->set_help_flag("--help", "print help");
        add_common(sub);
        if (std::string(name) == "dual") sub->add_option("--export-pair", cfg.export_pair, "directory for f/phi CSVs");
        if (std::string(name) == "bounds" || std::string(name) == "report")
            sub->add_option("--bound-tol", bound_tol_text, "relative slack for bound rows (default 0.02)");
        if (std::string(name) == "conjugate-check") sub->add_option("--samples", cfg.samples, "sample points per q");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        if (help) *help = app.help();
        cfg.command.clear();
        return cfg;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        if (!q_list.empty() && !q_grid.empty()) throw ConfigError("give either --q or --q-grid");
        if (!q_grid.empty()) {
            cfg.q = parse_grid(q_grid);
            for (double q : cfg.q) cfg.q_text.push_back(format_number(q));
        } else if (!q_list.empty()) {
            cfg.q = parse_real_list(q_list);
            std::size_t pos = 0;
            while (true) {
                const auto next = q_list.find(',', pos);
                cfg.q_text.push_back(trim(q_list.substr(pos, next == std::string::npos ? std::string::npos : next - pos)));
                if (next == std::string::npos) break;
                pos = next + 1;
            }
        } else if (cfg.command == "constants") {
            cfg.q = parse_grid("1:2:1/20");
            for (double q : cfg.q) cfg.q_text.push_back(format_number(q));
        } else if (cfg.command == "conjugate-check") {
            cfg.q = {1.2, 1.5, 1.8};
            cfg.q_text = {"1.2", "1.5", "1.8"};
        } else {
            cfg.q = {1.0};
            cfg.q_text = {"1"};
        }
        cfg.h_given = !h_list.empty();
        if (h_list.empty()) h_list = "1/64";
        cfg.h = parse_real_list(h_list);
        cfg.h_text.clear();
        std::size_t pos = 0;
        while (true) {
            const auto next = h_list.find(',', pos);
            cfg.h_text.push_back(trim(h_list.substr(pos, next == std::string::npos ? std::string::npos : next - pos)));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        if (!tol_text.empty()) cfg.tol = parse_real(tol_text);
        if (!bound_tol_text.empty()) cfg.bound_tol = parse_real(bound_tol_text);
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    }
    validate(cfg);
    return cfg;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto grid = build_domains(cfg);
    Sink sink(out, cfg.format);
    int status = kExitOk;
    for (std::size_t iq = 0; iq < cfg.q.size(); ++iq) {
        for (std::size_t ih = 0; ih < grid.size(); ++ih) {
            const auto& g = grid[ih];
            Record r = header(cfg, g.dom->shape().label, iq, ih, g.h);
            try {
                const FrequencySolution s = solve_frequency(g.dom, cfg.q[iq], cfg.tol);
                r["lambda1"] = num(s.lambda1);
                r["inv_lambda1"] = num(1.0 / s.lambda1);
                r["lambda1_alt"] = num(s.lambda1_alt);
                r["primal_max"] = num(s.primal_max);
                r["iterations"] = s.iterations;
                r["residual"] = num(s.residual);
                r["converged"] = true;
            } catch (const std::exception& e) {
                r["converged"] = false;
                r["error"] = e.what();
                err << "solve q=" << cfg.q_text[iq] << " h=" << r["h_text"].get<std::string>() << ": " << e.what()
                    << '\n';
                status = kExitNumerical;
            }
            sink.add(std::move(r));
        }
    }
    return status;
}

int cmd_dual(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto grid = build_domains(cfg);
    if (!cfg.export_pair.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(cfg.export_pair, ec);
        if (ec) throw ConfigError("cannot create " + cfg.export_pair + ": " + ec.message());
    }
    Sink sink(out, cfg.format);
    int status = kExitOk;
    for (std::size_t iq = 0; iq < cfg.q.size(); ++iq) {
        const double q = cfg.q[iq];
        std::vector<double> gaps;
        for (std::size_t ih = 0; ih < grid.size(); ++ih) {
            const auto& g = grid[ih];
            Record r = header(cfg, g.dom->shape().label, iq, ih, g.h);
            try {
                const FrequencySolution s = solve_frequency(g.dom, q, cfg.tol);
                DualPair pair = optimal_pair(s);
                const FeasibilityReport feas = check_feasibility(pair, cfg.seed);
                pair.feasibility_residual = std::min(feas.hat_min, feas.bump_min);
                const DualityReport rep = weak_duality_certificate(s, pair);
                const double budget = gap_budget(q, g.h);
                const bool within = rep.certified && feas.feasible && std::abs(rep.gap_relative) <= budget;
                r["lambda1"] = num(s.lambda1);
                r["primal_value"] = num(rep.primal_value);
                r["dual_value"] = num(rep.dual_value);
                r["gap"] = num(rep.gap);
                r["gap_relative"] = num(rep.gap_relative);
                r["gap_budget"] = budget;
                r["tol_budget"] = num(rep.tol_budget);
                r["remainder"] = num(rep.remainder);
                r["hat_min"] = num(feas.hat_min);
                r["bump_min"] = num(feas.bump_min);
                r["feasible"] = feas.feasible;
                r["certified"] = rep.certified;
                r["within_budget"] = within;
                gaps.push_back(std::abs(rep.gap_relative));
                if (!within) status = kExitNumerical;
                if (!cfg.export_pair.empty()) {
                    const std::string stem = cfg.export_pair + "/pair_q" + file_token(cfg.q_text[iq]) + "_h" +
                                             file_token(r["h_text"].get<std::string>());
                    std::ofstream ff(stem + "_f.csv"), fp(stem + "_phi.csv");
                    if (!ff || !fp) throw ConfigError("cannot write pair files under " + cfg.export_pair);
                    write_csv(ff, pair.f);
                    write_csv(fp, pair.phi);
                }
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception& e) {
                r["error"] = e.what();
                r["within_budget"] = false;
                err << "dual q=" << cfg.q_text[iq] << ": " << e.what() << '\n';
                status = kExitNumerical;
                gaps.push_back(std::nan(""));
            }
            sink.add(std::move(r));
        }
        if (grid.size() >= 2) {
            Record r;
            r["command"] = cfg.command;
            r["record"] = "sweep";
            r["domain"] = grid.front().dom->shape().label;
            r["q"] = q;
            r["q_text"] = cfg.q_text[iq];
            Record arr = Record::array();
            bool monotone = true;
            for (std::size_t i = 0; i < gaps.size(); ++i) {
                arr.push_back(num(gaps[i]));
                if (i > 0 && !(gaps[i] < gaps[i - 1])) monotone = false;
            }
            r["gaps"] = arr;
            r["gap_monotone"] = monotone;
            sink.add(std::move(r));
        }
    }
    return status;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto grid = build_domains(cfg);
    Sink sink(out, cfg.format);
    int status = kExitOk;
    BoundOptions opts;
    opts.tol = cfg.bound_tol;
    opts.solver_tol = cfg.tol;
    for (std::size_t ih = 0; ih < grid.size(); ++ih) {
        const auto& g = grid[ih];
        const auto reports = bound_report(g.dom, cfg.q, opts);
        for (std::size_t iq = 0; iq < reports.size(); ++iq) {
            const BoundReport& rep = reports[iq];
            if (!rep.ok()) status = kExitNumerical;
            if (!rep.error.empty()) {
                Record r = header(cfg, rep.domain_id, iq, ih, g.h);
                r["error"] = rep.error;
                err << "bounds q=" << cfg.q_text[iq] << ": " << rep.error << '\n';
                sink.add(std::move(r));
                continue;
            }
            for (const BoundRow& row : rep.rows) {
                Record r = header(cfg, rep.domain_id, iq, ih, g.h);
                r["lambda1"] = num(rep.lambda1_computed);
                r["bound"] = row.name;
                r["type"] = to_string(row.type);
                r["value"] = num(row.value);
                r["applicable"] = row.applicable;
                r["certified"] = row.certified;
                r["satisfied"] = row.satisfied;
                r["slack"] = num(row.slack);
                r["hm_ordering_ok"] = rep.hm_ordering_ok;
                r["note"] = row.note;
                sink.add(std::move(r));
            }
        }
    }
    return status;
}

int cmd_constants(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    Sink sink(out, cfg.format);
    for (std::size_t iq = 0; iq < cfg.q.size(); ++iq) {
        Record r;
        r["command"] = cfg.command;
        r["q"] = cfg.q[iq];
        r["q_text"] = cfg.q_text[iq];
        const double p = pi_2q(cfg.q[iq]);
        r["pi_2q"] = p;
        r["lambda1_interval"] = p * p * std::pow(2.0, -(2.0 + cfg.q[iq]) / cfg.q[iq]);
        sink.add(std::move(r));
    }
    return kExitOk;
}

int cmd_conjugate_check(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    Sink sink(out, cfg.format);
    int status = kExitOk;
    const double limit = 1e-3;
    for (std::size_t iq = 0; iq < cfg.q.size(); ++iq) {
        const ConjugateCheck c = conjugate_check(cfg.q[iq], cfg.samples, cfg.seed);
        Record r;
        r["command"] = cfg.command;
        r["q"] = cfg.q[iq];
        r["q_text"] = cfg.q_text[iq];
        r["samples"] = c.samples;
        r["seed"] = cfg.seed;
        r["max_rel_error_closed"] = c.max_rel_closed;
        r["max_rel_error_identity"] = c.max_rel_identity;
        const bool pass = c.max_rel_closed <= limit && c.max_rel_identity <= limit;
        r["passed"] = pass;
        if (!pass) status = kExitNumerical;
        sink.add(std::move(r));
    }
    return status;
}

int cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto grid = build_domains(cfg);
    Sink sink(out, cfg.format);
    int status = kExitOk;
    BoundOptions opts;
    opts.tol = cfg.bound_tol;
    opts.solver_tol = cfg.tol;
    std::vector<std::vector<double>> lam(cfg.q.size());
    for (std::size_t ih = 0; ih < grid.size(); ++ih) {
        const auto& g = grid[ih];
        const auto reports = bound_report(g.dom, cfg.q, opts);
        for (std::size_t iq = 0; iq < cfg.q.size(); ++iq) {
            Record r = header(cfg, g.dom->shape().label, iq, ih, g.h);
            try {
                const FrequencySolution s = solve_frequency(g.dom, cfg.q[iq], cfg.tol);
                const DualPair pair = optimal_pair(s);
                const DualityReport rep = weak_duality_certificate(s, pair);
                const double budget = gap_budget(cfg.q[iq], g.h);
                const bool within = rep.certified && std::abs(rep.gap_relative) <= budget;
                int applicable = 0, satisfied = 0;
                for (const BoundRow& row : reports[iq].rows) {
                    if (!row.applicable || !row.certified) continue;
                    ++applicable;
                    satisfied += row.satisfied ? 1 : 0;
                }
                r["lambda1"] = num(s.lambda1);
                r["gap_relative"] = num(rep.gap_relative);
                r["gap_budget"] = budget;
                r["within_budget"] = within;
                r["bounds_applicable"] = applicable;
                r["bounds_satisfied"] = satisfied;
                r["hm_ordering_ok"] = reports[iq].hm_ordering_ok;
                r["bounds_ok"] = reports[iq].ok();
                if (!within || !reports[iq].ok()) status = kExitNumerical;
                lam[iq].push_back(s.lambda1);
            } catch (const std::exception& e) {
                r["error"] = e.what();
                err << "report q=" << cfg.q_text[iq] << ": " << e.what() << '\n';
                status = kExitNumerical;
                lam[iq].push_back(std::nan(""));
            }
            sink.add(std::move(r));
        }
    }
    if (grid.size() >= 2) {
        // Second-order extrapolation over the two finest grids.
        const double hc = grid[grid.size() - 2].h, hf = grid.back().h;
        const double r2 = (hc / hf) * (hc / hf);
        for (std::size_t iq = 0; iq < cfg.q.size(); ++iq) {
            const double lc = lam[iq][lam[iq].size() - 2], lf = lam[iq].back();
            Record r;
            r["command"] = cfg.command;
            r["record"] = "richardson";
            r["domain"] = grid.front().dom->shape().label;
            r["q"] = cfg.q[iq];
            r["q_text"] = cfg.q_text[iq];
            r["lambda1_extrapolated"] = num((r2 * lf - lc) / (r2 - 1.0));
            sink.add(std::move(r));
        }
    }
    return status;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        std::string help;
        cfg = parse_args(argc, argv, &help);
        if (cfg.command.empty()) {
            out << help;
            return kExitOk;
        }
        std::unique_ptr<std::ofstream> file;
        std::string path = cfg.out;
        if (path.empty()) {
            if (const char* dir = std::getenv("PFREQ_OUT_DIR"); dir && *dir)
                path = std::string(dir) + "/" + cfg.command + (cfg.format == "csv" ? ".csv" : ".jsonl");
        }
        if (!path.empty()) {
            file = std::make_unique<std::ofstream>(path);
            if (!*file) throw ConfigError("cannot open output file " + path);
        }
        std::ostream& os = file ? *file : out;
        if (cfg.command == "solve") return cmd_solve(cfg, os, err);
        if (cfg.command == "dual") return cmd_dual(cfg, os, err);
        if (cfg.command == "bounds") return cmd_bounds(cfg, os, err);
        if (cfg.command == "constants") return cmd_constants(cfg, os, err);
        if (cfg.command == "conjugate-check") return cmd_conjugate_check(cfg, os, err);
        return cmd_report(cfg, os, err);
    } catch (const ConfigError& e) {
        err << "pfreq: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace pfreq
