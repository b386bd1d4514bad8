// Command-line front end: reflection sweeps, thin-film limit studies,
// lattice sums and dispersion tables. Exit codes: 0 success, 1 usage error,
// 2 numeric failure (pole/divergence), 3 study check failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polsheet/core.hpp"
#include "polsheet/delta_scatter.hpp"
#include "polsheet/lattice.hpp"
#include "polsheet/slab.hpp"
#include "polsheet/sweep.hpp"
#include "polsheet/version.hpp"

namespace {

using nlohmann::ordered_json;
using namespace polsheet;

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    try {
        if (parts.size() == 1) {
            g.start = g.stop = std::stod(parts[0]);
            g.count = 1;
        } else if (parts.size() == 3 || parts.size() == 4) {
            g.start = std::stod(parts[0]);
            g.stop = std::stod(parts[1]);
            g.count = std::stoi(parts[2]);
            if (parts.size() == 4) {
                if (parts[3] == "log") g.log_scale = true;
                else if (parts[3] == "lin") g.log_scale = false;
                else throw std::invalid_argument("scale must be lin or log");
            }
        } else {
            throw std::invalid_argument("bad grid");
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid grid '" + text + "' (use v or start:stop:count[:lin|log])");
    }
    if (g.count < 1) throw std::invalid_argument("grid count must be >= 1");
    return g;
}

GridSpec grid_from_json(const ordered_json& j) {
    GridSpec g;
    if (j.is_number()) {
        g.start = g.stop = j.get<double>();
        g.count = 1;
        return g;
    }
    g.start = j.at("start").get<double>();
    g.stop = j.at("stop").get<double>();
    g.count = j.at("count").get<int>();
    if (j.contains("scale")) g.log_scale = (j.at("scale").get<std::string>() == "log");
    return g;
}

SheetMaterial parse_material(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    if (v.size() != 4 && v.size() != 5)
        throw std::invalid_argument("--material needs e,m,omega0,n[,c]");
    return SheetMaterial(v[0], v[1], v[2], v[3], v.size() == 5 ? v[4] : 1.0);
}

std::vector<Polarization> parse_pols(const std::string& text) {
    if (text == "te") return {Polarization::TE};
    if (text == "tm") return {Polarization::TM};
    if (text == "p") return {Polarization::P};
    if (text == "all") return {Polarization::TE, Polarization::TM, Polarization::P};
    throw std::invalid_argument("--pol must be te|tm|p|all");
}

ordered_json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    ordered_json j;
    in >> j;
    return j;
}

struct OutputSink {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
            os = &file;
        }
    }
    std::ostream& stream() { return *os; }
};

// Shared material/config options of the physics subcommands.
struct CommonOpts {
    std::string material_text;
    double q = 0.0;
    double c_for_q = 1.0;
    std::string config_path;
    std::string out_path;
    std::string format = "csv";

    CLI::Option* material_opt = nullptr;
    CLI::Option* q_opt = nullptr;
    CLI::Option* format_opt = nullptr;
    CLI::Option* out_opt = nullptr;

    void attach(CLI::App* cmd, bool with_format = true) {
        material_opt = cmd->add_option("--material", material_text, "material as e,m,omega0,n[,c]");
        q_opt = cmd->add_option("--q", q, "hydrodynamic shorthand: Omega=0 sheet with this q");
        cmd->add_option("--c", c_for_q, "light speed used with --q (default 1)");
        cmd->add_option("--config", config_path, "JSON config file; flags override its values");
        out_opt = cmd->add_option("--out", out_path, "output path (default stdout)");
        if (with_format)
            format_opt = cmd->add_option("--format", format, "csv|json")
                             ->check(CLI::IsMember({"csv", "json"}));
    }

    // flags override the config file
    void merge_config(const ordered_json& cfg) {
        if (!material_opt->count() && !q_opt->count()) {
            if (cfg.contains("material")) {
                const auto& m = cfg.at("material");
                std::ostringstream os;
                os << m.at("e").get<double>() << ',' << m.at("m").get<double>() << ','
                   << m.at("omega0").get<double>() << ',' << m.at("n").get<double>();
                if (m.contains("c")) os << ',' << m.at("c").get<double>();
                material_text = os.str();
                material_opt->count();  // leave counts alone; presence tracked by text
            } else if (cfg.contains("q")) {
                q = cfg.at("q").get<double>();
                if (cfg.contains("c")) c_for_q = cfg.at("c").get<double>();
            }
        }
        if (format_opt && !format_opt->count() && cfg.contains("format"))
            format = cfg.at("format").get<std::string>();
        if (!out_opt->count() && cfg.contains("out")) out_path = cfg.at("out").get<std::string>();
    }

    bool has_material_source(const ordered_json& cfg) const {
        return material_opt->count() || q_opt->count() || !material_text.empty() ||
               cfg.contains("material") || cfg.contains("q") || q > 0.0;
    }

    SheetMaterial resolve_material() const {
        if (!material_text.empty()) return parse_material(material_text);
        if (q > 0.0) return SheetMaterial::from_q_parameter(q, c_for_q);
        throw std::invalid_argument("no material given: use --material, --q, or a config file");
    }
};

int run_reflect(const CommonOpts& common, const std::string& omega_text, const std::string& k_text,
                const std::string& angle_text, const std::string& pol_text,
                const ordered_json& cfg, const std::string& command) {
    SweepSpec spec{common.resolve_material(), parse_pols(pol_text), GridSpec{}, GridSpec{}, false};

    std::string om = omega_text, kk = k_text, ang = angle_text;
    if (om.empty() && cfg.contains("omega")) spec.omega = grid_from_json(cfg.at("omega"));
    else if (!om.empty()) spec.omega = parse_grid(om);
    else throw std::invalid_argument("missing --omega");

    if (!kk.empty() && !ang.empty())
        throw std::invalid_argument("--k and --angle are mutually exclusive");
    if (kk.empty() && ang.empty()) {
        if (cfg.contains("k")) { spec.transverse = grid_from_json(cfg.at("k")); }
        else if (cfg.contains("angle")) {
            spec.transverse = grid_from_json(cfg.at("angle"));
            spec.transverse_is_angle = true;
        } else throw std::invalid_argument("missing --k or --angle");
    } else if (!kk.empty()) {
        spec.transverse = parse_grid(kk);
    } else {
        spec.transverse = parse_grid(ang);
        spec.transverse_is_angle = true;
    }

    const std::vector<SweepRow> rows = run_reflect_sweep(spec);
    for (const SweepRow& r : rows)
        if (r.pole)
            std::cerr << "warning: pole at omega=" << r.omega << " k=" << r.k << " pol="
                      << to_string(r.pol) << "; row flagged\n";

    RunManifest man;
    man.command = command;
    man.timestamp = RunManifest::now();
    man.settings.emplace_back("q_parameter", format_double17(q_parameter(spec.material)));
    man.settings.emplace_back("pol", pol_text);
    if (spec.transverse_is_angle) man.settings.emplace_back("transverse", "angle (deg); k resolved per row");
    else man.settings.emplace_back("transverse", "k");

    OutputSink sink(common.out_path);
    if (common.format == "csv") {
        write_sweep_csv(sink.stream(), man, rows);
    } else {
        ordered_json out;
        out["manifest"] = {{"tool_version", man.tool_version},
                           {"command", man.command},
                           {"timestamp", man.timestamp}};
        for (const auto& [key, val] : man.settings) out["manifest"][key] = val;
        out["rows"] = ordered_json::array();
        for (const SweepRow& r : rows) {
            out["rows"].push_back({{"omega", r.omega},
                                   {"k", r.k},
                                   {"pol", to_string(r.pol)},
                                   {"re_r", r.r.real()},
                                   {"im_r", r.r.imag()},
                                   {"re_t", r.t.real()},
                                   {"im_t", r.t.imag()},
                                   {"abs_r2", std::norm(r.r)},
                                   {"re_eta", r.eta.real()},
                                   {"im_eta", r.eta.imag()},
                                   {"pole", r.pole}});
        }
        sink.stream() << out.dump(2) << "\n";
    }
    return 0;
}

int run_slab_limit(const CommonOpts& common, double omega, double k, double lmin, double lmax,
                   int points, const std::string& command) {
    if (!(lmin > 0.0) || !(lmax > lmin))
        throw std::invalid_argument("need 0 < --lmin < --lmax");
    if (points < 3) throw std::invalid_argument("--points must be >= 3");
    const SheetMaterial mat = common.resolve_material();

    GridSpec lg{lmax, lmin, points, true};
    const SlabLimitReport rep = slab_limit_study(mat, omega, k, lg.values());

    RunManifest man;
    man.command = command;
    man.timestamp = RunManifest::now();
    man.settings.emplace_back("q_parameter", format_double17(q_parameter(mat)));
    man.settings.emplace_back("omega", format_double17(omega));
    man.settings.emplace_back("k", format_double17(k));
    man.settings.emplace_back("slope_band_te", "[0.9,1.1]");
    man.settings.emplace_back("slope_band_tm", "[0.4,0.6]");

    OutputSink sink(common.out_path);
    std::ostream& os = sink.stream();
    write_manifest_comments(os, man);
    os << "L,resid_te,resid_tm\n";
    for (const SlabLimitPoint& p : rep.points)
        os << format_double17(p.thickness) << ',' << format_double17(p.residual_te) << ','
           << format_double17(p.residual_tm) << "\n";
    os << "# slope_te: " << format_double17(rep.slope_te) << "\n";
    os << "# slope_tm: " << format_double17(rep.slope_tm) << "\n";
    os << "# smallest_residual_te: " << format_double17(rep.smallest_residual_te()) << "\n";
    os << "# smallest_residual_tm: " << format_double17(rep.smallest_residual_tm()) << "\n";
    os << "# sheet_r_te: " << format_double17(rep.sheet_te.real()) << ' '
       << format_double17(rep.sheet_te.imag()) << "\n";
    os << "# sheet_r_tm: " << format_double17(rep.sheet_tm.real()) << ' '
       << format_double17(rep.sheet_tm.imag()) << "\n";

    const bool te_ok = rep.slope_te >= 0.9 && rep.slope_te <= 1.1;
    const bool tm_ok = rep.slope_tm >= 0.4 && rep.slope_tm <= 0.6;
    os << "# slopes_in_band: " << (te_ok && tm_ok ? "yes" : "no") << "\n";
    return (te_ok && tm_ok) ? 0 : 3;
}

int run_dispersion(const CommonOpts& common, double spacing, const std::string& k_text, int cutoff,
                   const std::string& command) {
    const SheetMaterial mat = common.resolve_material();

    RunManifest man;
    man.command = command;
    man.timestamp = RunManifest::now();
    man.settings.emplace_back("spacing", format_double17(spacing));

    OutputSink sink(common.out_path);
    std::ostream& os = sink.stream();
    write_manifest_comments(os, man);
    auto emit = [&os](const std::string& label, double tau, const DispersionRoot& r) {
        os << label << ',' << format_double17(tau) << ',' << format_double17(r.omega_squared)
           << ',' << (r.stable ? format_double17(r.frequency()) : std::string("unstable")) << "\n";
    };
    os << "channel,tau,omega_squared,omega\n";
    if (k_text.empty()) {
        const double z23 = epstein_zeta(3.0);
        emit("parallel", 0.5 * z23, dispersion_leading(mat, spacing, DispersionChannel::Parallel));
        emit("parallel", 0.5 * z23, dispersion_leading(mat, spacing, DispersionChannel::Parallel));
        emit("perpendicular", -z23,
             dispersion_leading(mat, spacing, DispersionChannel::Perpendicular));
        return 0;
    }
    LatticeWavevector k;
    {
        std::stringstream ss(k_text);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
            throw std::invalid_argument("--k needs kx,ky");
        k.kx = std::stod(a);
        k.ky = std::stod(b);
    }
    const StaticDispersion d = dispersion_static(mat, spacing, k, cutoff);
    emit("in_plane_1", d.tau[0], d.roots[0]);
    emit("in_plane_2", d.tau[1], d.roots[1]);
    emit("out_of_plane", d.tau[2], d.roots[2]);
    return 0;
}

void write_lattice_header(std::ostream& os, const std::string& command,
                          std::vector<std::pair<std::string, std::string>> settings) {
    RunManifest man;
    man.command = command;
    man.timestamp = RunManifest::now();
    man.settings = std::move(settings);
    write_manifest_comments(os, man);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scattering off a polarizable sheet: reflection sweeps, slab limits, lattice sums"};
    app.set_version_flag("--version", polsheet::version);
    app.require_subcommand(1);
    const std::string command = join_args(argc, argv);

    // reflect / sweep (same engine: reflect is handy for single points)
    struct ReflectArgs {
        CommonOpts common;
        std::string omega, k, angle, pol = "all";
        CLI::Option* pol_opt = nullptr;
    };
    auto add_reflect = [&](const char* name, const char* desc) {
        auto* cmd = app.add_subcommand(name, desc);
        auto args = std::make_shared<ReflectArgs>();
        args->common.attach(cmd);
        cmd->add_option("--omega", args->omega, "frequency grid: v or start:stop:count[:lin|log]");
        cmd->add_option("--k", args->k, "parallel wavenumber grid");
        cmd->add_option("--angle", args->angle, "incidence angle grid, degrees in [0,90)");
        args->pol_opt = cmd->add_option("--pol", args->pol, "te|tm|p|all (default all)");
        cmd->callback([args, command]() {
            ordered_json cfg;
            if (!args->common.config_path.empty()) cfg = load_config(args->common.config_path);
            args->common.merge_config(cfg);
            if (!args->pol_opt->count() && cfg.contains("pol"))
                args->pol = cfg.at("pol").get<std::string>();
            std::exit(run_reflect(args->common, args->omega, args->k, args->angle, args->pol, cfg,
                                  command));
        });
        return cmd;
    };
    add_reflect("reflect", "reflection/transmission at one or more (omega, k) points");
    add_reflect("sweep", "reflection/transmission parameter sweep");

    // slab-limit
    {
        auto* cmd = app.add_subcommand("slab-limit", "thin-film convergence study onto the sheet");
        auto common = std::make_shared<CommonOpts>();
        common->attach(cmd, false);
        auto omega = std::make_shared<double>(0.0);
        auto k = std::make_shared<double>(0.0);
        auto lmin = std::make_shared<double>(0.0);
        auto lmax = std::make_shared<double>(0.0);
        auto points = std::make_shared<int>(0);
        cmd->add_option("--omega", *omega, "frequency")->required();
        cmd->add_option("--k", *k, "parallel wavenumber")->required();
        cmd->add_option("--lmin", *lmin, "smallest thickness")->required();
        cmd->add_option("--lmax", *lmax, "largest thickness")->required();
        cmd->add_option("--points", *points, "grid size (>= 3)")->required();
        cmd->callback([=]() {
            ordered_json cfg;
            if (!common->config_path.empty()) cfg = load_config(common->config_path);
            common->merge_config(cfg);
            std::exit(run_slab_limit(*common, *omega, *k, *lmin, *lmax, *points, command));
        });
    }

    // dispersion (also reachable as `lattice dispersion`)
    auto add_dispersion = [&](CLI::App* parent) {
        auto* cmd = parent->add_subcommand("dispersion", "lattice eigenmode frequencies");
        auto common = std::make_shared<CommonOpts>();
        common->attach(cmd, false);
        auto spacing = std::make_shared<double>(1.0);
        auto ktext = std::make_shared<std::string>();
        auto cutoff = std::make_shared<int>(2000);
        cmd->add_option("--spacing", *spacing, "lattice spacing a (default 1)");
        cmd->add_option("--k", *ktext, "dimensionless wavevector kx,ky (static table)");
        cmd->add_option("--cutoff", *cutoff, "lattice sum cutoff (default 2000)");
        cmd->callback([=]() {
            ordered_json cfg;
            if (!common->config_path.empty()) cfg = load_config(common->config_path);
            common->merge_config(cfg);
            std::exit(run_dispersion(*common, *spacing, *ktext, *cutoff, command));
        });
    };
    add_dispersion(&app);

    // lattice: zeta / J / T / dispersion
    {
        auto* lat = app.add_subcommand("lattice", "square-lattice sums and the coupling matrix");
        lat->require_subcommand(1);
        {
            auto* cmd = lat->add_subcommand("zeta", "closed-form lattice zeta with direct-sum check");
            auto s = std::make_shared<double>(0.0);
            auto cutoff = std::make_shared<int>(2000);
            auto out = std::make_shared<std::string>();
            cmd->add_option("s", *s, "exponent (> 2)")->required();
            cmd->add_option("--cutoff", *cutoff, "direct-sum cutoff (default 2000)");
            cmd->add_option("--out", *out, "output path");
            cmd->callback([=]() {
                const double closed = polsheet::epstein_zeta(*s);
                const polsheet::LatticeSumResult raw = polsheet::lattice_sum(*s, {0.0, 0.0}, *cutoff);
                OutputSink sink(*out);
                std::ostream& os = sink.stream();
                write_lattice_header(os, command, {{"s", polsheet::format_double17(*s)}});
                os << "closed_form " << polsheet::format_double17(closed) << "\n";
                os << "direct_corrected "
                   << polsheet::format_double17(raw.value + raw.tail_estimate) << "\n";
                os << "direct_raw " << polsheet::format_double17(raw.value) << "\n";
                os << "cutoff " << raw.cutoff << "\n";
                os << "tail_estimate " << polsheet::format_double17(raw.tail_estimate) << "\n";
                std::exit(0);
            });
        }
        {
            auto* cmd = lat->add_subcommand("J", "lattice sum at a wavevector");
            auto s = std::make_shared<double>(0.0);
            auto kx = std::make_shared<double>(0.0);
            auto ky = std::make_shared<double>(0.0);
            auto cutoff = std::make_shared<int>(2000);
            auto out = std::make_shared<std::string>();
            cmd->add_option("s", *s, "exponent (> 2)")->required();
            cmd->add_option("kx", *kx, "wavevector x (units 1/a)")->required();
            cmd->add_option("ky", *ky, "wavevector y (units 1/a)")->required();
            cmd->add_option("N", *cutoff, "cutoff (default 2000)");
            cmd->add_option("--out", *out, "output path");
            cmd->callback([=]() {
                const polsheet::LatticeSumResult r = polsheet::lattice_sum(*s, {*kx, *ky}, *cutoff);
                OutputSink sink(*out);
                std::ostream& os = sink.stream();
                write_lattice_header(os, command,
                                     {{"s", polsheet::format_double17(*s)},
                                      {"kx", polsheet::format_double17(*kx)},
                                      {"ky", polsheet::format_double17(*ky)}});
                os << "value " << polsheet::format_double17(r.value) << "\n";
                os << "cutoff " << r.cutoff << "\n";
                os << "tail_estimate " << polsheet::format_double17(r.tail_estimate) << "\n";
                std::exit(0);
            });
        }
        {
            auto* cmd = lat->add_subcommand("T", "static coupling matrix at a wavevector");
            auto kx = std::make_shared<double>(0.0);
            auto ky = std::make_shared<double>(0.0);
            auto cutoff = std::make_shared<int>(2000);
            auto out = std::make_shared<std::string>();
            cmd->add_option("kx", *kx, "wavevector x (units 1/a)")->required();
            cmd->add_option("ky", *ky, "wavevector y (units 1/a)")->required();
            cmd->add_option("N", *cutoff, "cutoff (default 2000)");
            cmd->add_option("--out", *out, "output path");
            cmd->callback([=]() {
                const polsheet::InteractionMatrix t =
                    polsheet::static_interaction_matrix({*kx, *ky}, *cutoff);
                OutputSink sink(*out);
                std::ostream& os = sink.stream();
                write_lattice_header(os, command,
                                     {{"kx", polsheet::format_double17(*kx)},
                                      {"ky", polsheet::format_double17(*ky)},
                                      {"cutoff", std::to_string(*cutoff)}});
                for (int i = 0; i < 3; ++i) {
                    os << polsheet::format_double17(t.matrix(i, 0)) << ' '
                       << polsheet::format_double17(t.matrix(i, 1)) << ' '
                       << polsheet::format_double17(t.matrix(i, 2)) << "\n";
                }
                os << "tail_estimate " << polsheet::format_double17(t.tail_estimate) << "\n";
                std::exit(0);
            });
        }
        add_dispersion(lat);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
