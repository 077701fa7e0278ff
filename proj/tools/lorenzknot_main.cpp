#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "lorenzknot/invariants.hpp"
#include "lorenzknot/json_io.hpp"
#include "lorenzknot/parallel.hpp"
#include "lorenzknot/project.hpp"
#include "lorenzknot/template_orbit.hpp"
#include "lorenzknot/version.hpp"

namespace fs = std::filesystem;
using namespace lorenzknot;
using nlohmann::json;

namespace {

// Exit codes: 0 success, 2 domain error, 3 no convergence / not a T-point,
// 4 degenerate projection exhausted, 5 I/O.
constexpr int kExitDomain = 2, kExitNoConvergence = 3, kExitProjection = 4, kExitIo = 5;

struct Cli {
    RunConfig cfg;
    std::string out_root{"runs"};
    int jobs{1};
    bool deterministic{false};
};

fs::path make_run_dir(const Cli& cli, const std::string& subcommand) {
    const fs::path dir =
        fs::path(cli.out_root) / (subcommand + "-" + cli.cfg.content_hash().substr(0, 12));
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::ios_base::failure("cannot create " + dir.string());
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    os << content;
    if (!os) throw std::ios_base::failure("cannot write " + path.string());
}

Params params_from(const RunConfig& cfg) {
    return Params{cfg.get_double("rho", 28.0), cfg.get_double("sigma", 10.0),
                  cfg.get_double("beta", 8.0 / 3.0)};
}

std::string timestamp_now(bool deterministic) {
    if (deterministic) return "";
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

json matrix_json(const IntegerMatrix2& m) {
    return json::array({json::array({m.a[0][0], m.a[0][1]}),
                        json::array({m.a[1][0], m.a[1][1]})});
}

int cmd_equilibria(const Cli& cli) {
    const Params p = params_from(cli.cfg);
    const auto eqs = equilibria(p);
    json j;
    j["rho"] = p.rho;
    j["sigma"] = p.sigma;
    j["beta"] = p.beta;
    json list = json::array();
    for (const auto& eq : eqs) {
        json e;
        e["kind"] = to_string(eq.kind);
        e["location"] = json::array({eq.location.x(), eq.location.y(), eq.location.z()});
        json vals = json::array(), vecs = json::array();
        for (int i = 0; i < 3; ++i) {
            vals.push_back(json::array({eq.eigenvalues[static_cast<size_t>(i)].real(),
                                        eq.eigenvalues[static_cast<size_t>(i)].imag()}));
            const Vec3& v = eq.eigenvectors[static_cast<size_t>(i)];
            vecs.push_back(json::array({v.x(), v.y(), v.z()}));
        }
        e["eigenvalues"] = std::move(vals);
        e["eigenvectors"] = std::move(vecs);
        list.push_back(std::move(e));
    }
    j["equilibria"] = std::move(list);
    json cfg_block = json::object();
    for (const auto& [k, v] : cli.cfg.entries()) cfg_block[k] = v;
    j["config"] = cfg_block;
    j["tool"] = kToolVersion;
    const fs::path dir = make_run_dir(cli, "equilibria");
    write_file(dir / "equilibria.json", j.dump(2) + "\n");
    std::cout << dir.string() << "\n";
    return 0;
}

int cmd_manifold(const Cli& cli) {
    const Params p = params_from(cli.cfg);
    const std::string kind_name = cli.cfg.get("kind", "origin");
    EquilibriumKind kind = EquilibriumKind::origin;
    if (kind_name == "p_plus") kind = EquilibriumKind::p_plus;
    else if (kind_name == "p_minus") kind = EquilibriumKind::p_minus;
    else if (kind_name != "origin") throw DomainError("manifold: kind must be origin|p_plus|p_minus");
    const int sign = cli.cfg.get_int("sign", 1) >= 0 ? 1 : -1;

    BranchConfig bc;
    bc.tol = cli.cfg.get_double("tol", 1e-10);
    bc.eps_rel = cli.cfg.get_double("eps", 1e-6);
    bc.delta_conn = cli.cfg.get_double("delta_conn", 1e-4);
    bc.horizon = cli.cfg.get_double("horizon", 50.0);
    const TrappingSphere ts = make_trapping_sphere(p);
    const auto eq = equilibrium(p, kind);
    const ManifoldBranch br = manifold_branch(p, eq, sign, bc, ts);
    const fs::path dir = make_run_dir(cli, "manifold");
    write_file(dir / "branch.json", branch_json(p, bc.tol, br, &cli.cfg));
    std::cout << dir.string() << "\n" << termination_string(br) << "\n";
    return 0;
}

TPointTrace solve_tpoint(const Cli& cli) {
    const double beta = cli.cfg.get_double("beta", 8.0 / 3.0);
    const Params guess{cli.cfg.get_double("guess_rho", 30.0),
                       cli.cfg.get_double("guess_sigma", 10.0), beta};
    TPointConfig tc;
    tc.tol_tp = cli.cfg.get_double("tol_tp", 1e-8);
    tc.max_iter = cli.cfg.get_int("max_iter", 50);
    tc.miss.tol = cli.cfg.get_double("tol", 1e-10);
    tc.miss.eps_rel = cli.cfg.get_double("eps", 1e-6);
    return find_tpoint(guess, beta, tc);
}

int cmd_tpoint(const Cli& cli) {
    const TPointTrace tr = solve_tpoint(cli);
    const fs::path dir = make_run_dir(cli, "tpoint");
    write_file(dir / "tpoint.json", tpoint_json(tr.tpoint, &cli.cfg));
    std::cout << dir.string() << "\n";
    char line[160];
    std::snprintf(line, sizeof line, "(rho, sigma) = (%.6f, %.6f), residual %.3e\n",
                  tr.tpoint.params.rho, tr.tpoint.params.sigma, tr.tpoint.residual);
    std::cout << line;
    return 0;
}

int cmd_sweep(const Cli& cli) {
    SweepGrid grid{cli.cfg.get_double("rho_min", 30.4), cli.cfg.get_double("rho_max", 31.4),
                   cli.cfg.get_double("sigma_min", 9.7), cli.cfg.get_double("sigma_max", 10.7),
                   cli.cfg.get_int("nrho", 21), cli.cfg.get_int("nsigma", 21)};
    MissConfig mc;
    mc.tol = cli.cfg.get_double("tol", 1e-10);
    mc.eps_rel = cli.cfg.get_double("eps", 1e-6);
    const auto rows = sweep(grid, cli.cfg.get_double("beta", 8.0 / 3.0), mc, cli.jobs);
    std::string csv;
    for (const auto& [k, v] : cli.cfg.entries()) csv += "# " + k + "=" + v + "\n";
    csv += std::string("# tool=") + kToolVersion + "\n";
    csv += sweep_csv(rows);
    const fs::path dir = make_run_dir(cli, "sweep");
    write_file(dir / "sweep.csv", csv);
    std::cout << dir.string() << "\n";
    return 0;
}

int cmd_knot(const Cli& cli) {
    const fs::path dir = make_run_dir(cli, "knot");
    std::string stage = "tpoint";
    try {
        TPointTrace tr = solve_tpoint(cli);
        write_file(dir / "tpoint.json", tpoint_json(tr.tpoint, &cli.cfg));

        stage = "assembly";
        AssemblyConfig ac;
        ac.tol = cli.cfg.get_double("tol", 1e-10);
        ac.eps_rel = cli.cfg.get_double("eps", 1e-6);
        ac.delta_conn = cli.cfg.get_double("delta_conn", 1e-4);
        ac.inflation = cli.cfg.get_double("inflation", 3.0);
        ac.delta_simple_rel = cli.cfg.get_double("delta_simple", 1e-3);
        const ClosedCurve curve = assemble_invariant_curve(tr.tpoint, ac);
        write_file(dir / "curve.json", curve_json(curve, &cli.cfg));

        stage = "projection";
        const uint64_t seed = static_cast<uint64_t>(cli.cfg.get_int("seed", 1));
        Vec3 direction;
        const KnotDiagram raw = project_generic(curve, seed, 20, &direction);
        const KnotDiagram diagram = reidemeister_simplify(raw);
        write_file(dir / "diagram.pd", pd_code(diagram));
        write_file(dir / "diagram.svg",
                   render_svg(curve, direction, timestamp_now(cli.deterministic)));

        stage = "classification";
        const Laurent alex = alexander_polynomial(diagram);
        KnotName name = classify(alex);
        tr.tpoint.knot_hint = name.text;
        write_file(dir / "tpoint.json", tpoint_json(tr.tpoint, &cli.cfg));
        json j;
        j["verdict"] = name.text;
        j["alexander"] = alex.to_string();
        j["crossings"] = diagram.crossings();
        j["writhe"] = diagram.writhe();
        j["rho"] = tr.tpoint.params.rho;
        j["sigma"] = tr.tpoint.params.sigma;
        j["beta"] = tr.tpoint.params.beta;
        j["residual"] = tr.tpoint.residual;
        j["seed"] = seed;
        j["direction"] = json::array({direction.x(), direction.y(), direction.z()});
        if (diagram.crossings() <= 24)
            j["jones_quarter_variable"] = kauffman_bracket_jones(diagram).to_string("q");
        json cfg_block = json::object();
        for (const auto& [k, v] : cli.cfg.entries()) cfg_block[k] = v;
        j["config"] = cfg_block;
        j["tool"] = kToolVersion;
        write_file(dir / "knot.json", j.dump(2) + "\n");
        write_file(dir / "verdict.txt", name.text + "\n");
        std::cout << dir.string() << "\n" << name.text << "\n";
        return 0;
    } catch (...) {
        std::cerr << "failed stage: " << stage << " (partial artifacts in " << dir.string()
                  << ")\n";
        throw;
    }
}

int cmd_template(const Cli& cli) {
    const fs::path dir = make_run_dir(cli, "template");
    if (cli.cfg.has("word")) {
        const TemplateWord w(cli.cfg.get("word", ""));
        const IntegerMatrix2 m = word_to_matrix(w);
        json j;
        j["word"] = w.letters();
        j["matrix"] = matrix_json(m);
        j["trace"] = m.trace();
        if (w.primitive() && w.length() <= 16) {
            const ClosedCurve c = template_orbit(w);
            const KnotDiagram d =
                reidemeister_simplify(project_generic(c, 0x10a3d5u, 20));
            const KnotName name = classify(alexander_polynomial(d));
            j["knot"] = name.text;
            j["pd"] = pd_code(d);
            write_file(dir / "orbit.pd", pd_code(d));
            std::cout << name.text << ", trace " << m.trace() << "\n";
        } else {
            j["knot"] = nullptr;
            std::cout << "trace " << m.trace() << " (orbit skipped: "
                      << (w.primitive() ? "length cap" : "non-primitive word") << ")\n";
        }
        json cfg_block = json::object();
        for (const auto& [k, v] : cli.cfg.entries()) cfg_block[k] = v;
        j["config"] = cfg_block;
        j["tool"] = kToolVersion;
        write_file(dir / "template.json", j.dump(2) + "\n");
        std::cout << dir.string() << "\n";
        return 0;
    }
    // Exhaustive scan in length-lex order, fanned out per word.
    const int maxlen = cli.cfg.get_int("scan_maxlen", 6);
    if (maxlen < 1 || maxlen > 16)
        throw DomainError("template: scan_maxlen must be within [1, 16]");
    std::vector<std::string> words;
    for (int len = 1; len <= maxlen; ++len)
        for (int bits = 0; bits < (1 << len); ++bits) {
            std::string w;
            for (int i = len - 1; i >= 0; --i) w += ((bits >> i) & 1) ? 'R' : 'L';
            if (TemplateWord(w).primitive()) words.push_back(std::move(w));
        }
    std::vector<json> results(words.size());
    parallel_for(static_cast<int>(words.size()), cli.jobs, [&](int i) {
        const TemplateWord w(words[static_cast<size_t>(i)]);
        json j;
        j["word"] = w.letters();
        j["trace"] = word_to_matrix(w).trace();
        try {
            j["knot"] = orbit_knot_type(w).text;
        } catch (const std::exception& e) {
            j["knot"] = nullptr;
            j["error"] = e.what();
        }
        results[static_cast<size_t>(i)] = std::move(j);
    });
    json j;
    j["scan_maxlen"] = maxlen;
    j["orbits"] = json::array();
    for (auto& r : results) j["orbits"].push_back(std::move(r));
    json cfg_block = json::object();
    for (const auto& [k, v] : cli.cfg.entries()) cfg_block[k] = v;
    j["config"] = cfg_block;
    j["tool"] = kToolVersion;
    write_file(dir / "scan.json", j.dump(2) + "\n");
    std::cout << dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolVersion) +
                 " - heteroclinic T-points of the Lorenz equations and the knot types "
                 "of their invariant curves"};
    app.require_subcommand(1);

    Cli cli;
    std::string config_path;
    app.add_option("--config", config_path, "flat key=value configuration file");
    app.add_option("--out", cli.out_root, "artifact root directory (default runs/)");
    app.add_option("--jobs", cli.jobs, "worker threads for sweep and scan fan-out");
    app.add_flag("--deterministic", cli.deterministic,
                 "suppress the timestamp comment in SVG output");

    // Every tunable doubles as a config key; command-line values win.
    std::map<std::string, std::string> flag_values;
    const auto add_kv = [&](CLI::App* sub, const std::string& key, const std::string& help) {
        sub->add_option_function<std::string>(
            "--" + key, [&flag_values, key](const std::string& v) { flag_values[key] = v; },
            help);
    };

    CLI::App* eq = app.add_subcommand("equilibria", "three singular points with eigen-data");
    CLI::App* mf = app.add_subcommand("manifold", "trace one 1-D invariant manifold branch");
    CLI::App* tp = app.add_subcommand("tpoint", "solve for a T-point from a guess");
    CLI::App* sw = app.add_subcommand("sweep", "miss-distance table over a (rho,sigma) grid");
    CLI::App* kn = app.add_subcommand("knot", "T-point, invariant curve, diagram, verdict");
    CLI::App* te = app.add_subcommand("template", "L/R word to matrix, orbit, knot type");

    for (CLI::App* sub : {eq, mf, tp, sw, kn, te}) {
        sub->fallthrough();
        add_kv(sub, "rho", "rho parameter");
        add_kv(sub, "sigma", "sigma parameter");
        add_kv(sub, "beta", "beta parameter");
        add_kv(sub, "tol", "integrator tolerance");
    }
    add_kv(mf, "kind", "origin | p_plus | p_minus");
    add_kv(mf, "sign", "+1 | -1 branch side");
    add_kv(mf, "eps", "seed offset scale");
    add_kv(mf, "delta_conn", "connection-detection radius");
    add_kv(mf, "horizon", "integration horizon");
    for (CLI::App* sub : {tp, kn}) {
        add_kv(sub, "guess_rho", "initial rho guess");
        add_kv(sub, "guess_sigma", "initial sigma guess");
        add_kv(sub, "tol_tp", "T-point residual tolerance");
        add_kv(sub, "max_iter", "solver iteration cap");
        add_kv(sub, "eps", "seed offset scale");
    }
    add_kv(kn, "seed", "projection-direction seed");
    add_kv(kn, "inflation", "closure sphere inflation factor");
    add_kv(kn, "delta_conn", "connection-detection radius");
    add_kv(kn, "delta_simple", "simplicity threshold (fraction of diameter)");
    for (const char* key : {"rho_min", "rho_max", "sigma_min", "sigma_max", "nrho", "nsigma"})
        add_kv(sw, key, "sweep grid");
    add_kv(sw, "eps", "seed offset scale");
    add_kv(te, "word", "cyclic word over {L,R}");
    add_kv(te, "scan_maxlen", "scan all primitive words up to this length");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) throw std::ios_base::failure("cannot read " + config_path);
            std::stringstream buf;
            buf << is.rdbuf();
            cli.cfg = RunConfig::parse(buf.str());
        }
        for (const auto& [k, v] : flag_values) cli.cfg.set(k, v);

        if (eq->parsed()) return cmd_equilibria(cli);
        if (mf->parsed()) return cmd_manifold(cli);
        if (tp->parsed()) return cmd_tpoint(cli);
        if (sw->parsed()) return cmd_sweep(cli);
        if (kn->parsed()) return cmd_knot(cli);
        if (te->parsed()) return cmd_template(cli);
        return kExitDomain;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const StructureError& e) {
        std::cerr << "structure error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const NoConvergenceError& e) {
        std::cerr << "no convergence: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const AssemblyError& e) {
        std::cerr << "assembly error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const DegenerateProjectionError& e) {
        std::cerr << "degenerate projection: " << e.what() << "\n";
        return kExitProjection;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
