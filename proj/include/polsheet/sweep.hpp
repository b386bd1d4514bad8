#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "polsheet/core.hpp"
#include "polsheet/delta_scatter.hpp"
#include "polsheet/version.hpp"

namespace polsheet {

/// One sweep axis: count points from start to stop, linear or logarithmic.
struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 1;
    bool log_scale = false;

    std::vector<double> values() const {
        if (count < 1) throw std::invalid_argument("GridSpec: count must be >= 1");
        if (count == 1) return {start};
        if (log_scale && !(start > 0.0 && stop > 0.0))
            throw std::invalid_argument("GridSpec: log grid needs positive endpoints");
        std::vector<double> v;
        v.reserve(count);
        if (log_scale) {
            const double la = std::log(start), lb = std::log(stop);
            for (int i = 0; i < count; ++i)
                v.push_back(std::exp(la + (lb - la) * i / (count - 1)));
        } else {
            for (int i = 0; i < count; ++i)
                v.push_back(start + (stop - start) * i / (count - 1));
        }
        return v;
    }
};

struct SweepSpec {
    SheetMaterial material;
    std::vector<Polarization> pols;  // kept in TE < TM < P order
    GridSpec omega;
    GridSpec transverse;   // k grid, or incidence angles in degrees
    bool transverse_is_angle = false;
};

struct SweepRow {
    double omega;
    double k;
    Polarization pol;
    cplx r, t, eta;
    bool pole = false;  // bound-state pole hit; values are NaN
};

/// Rows in deterministic order: omega outer, k (or angle) inner, polarization
/// innermost in TE < TM < P order. A pole in one row flags it and the sweep
/// continues.
inline std::vector<SweepRow> run_reflect_sweep(const SweepSpec& spec) {
    const std::vector<double> omegas = spec.omega.values();
    const std::vector<double> ts = spec.transverse.values();
    if (spec.transverse_is_angle)
        for (double a : ts)
            if (!(a >= 0.0 && a < 90.0))
                throw std::invalid_argument("sweep: angles must lie in [0, 90) degrees");
    std::vector<SweepRow> rows;
    rows.reserve(omegas.size() * ts.size() * spec.pols.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double w : omegas) {
        for (double t : ts) {
            const double k = spec.transverse_is_angle
                                 ? (w / spec.material.light_speed) * std::sin(t * pi / 180.0)
                                 : t;
            for (Polarization pol : spec.pols) {
                SweepRow row;
                row.omega = w;
                row.k = k;
                row.pol = pol;
                try {
                    const ScatterResult s = reflection(spec.material, pol, w, k);
                    row.r = s.r;
                    row.t = s.t;
                    row.eta = s.eta;
                } catch (const std::domain_error&) {
                    row.r = row.t = row.eta = cplx(nan, nan);
                    row.pole = true;
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

/// 17 significant digits; round-trips doubles exactly and keeps output
/// byte-deterministic.
inline std::string format_double17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Run provenance carried by every output file. The timestamp honors
/// SOURCE_DATE_EPOCH so identical runs can be made byte-identical.
struct RunManifest {
    std::string tool_version = version;
    std::string command;
    std::int64_t timestamp = 0;
    std::vector<std::pair<std::string, std::string>> settings;

    static std::int64_t now() {
        if (const char* e = std::getenv("SOURCE_DATE_EPOCH")) return std::atoll(e);
        return static_cast<std::int64_t>(std::time(nullptr));
    }
};

inline void write_manifest_comments(std::ostream& os, const RunManifest& m) {
    os << "# polsheet " << m.tool_version << "\n";
    os << "# command: " << m.command << "\n";
    os << "# timestamp: " << m.timestamp << "\n";
    for (const auto& [key, val] : m.settings) os << "# " << key << ": " << val << "\n";
}

inline void write_sweep_csv(std::ostream& os, const RunManifest& m,
                            const std::vector<SweepRow>& rows) {
    write_manifest_comments(os, m);
    os << "omega,k,pol,re_r,im_r,re_t,im_t,abs_r2,re_eta,im_eta\n";
    for (const SweepRow& r : rows) {
        os << format_double17(r.omega) << ',' << format_double17(r.k) << ',' << to_string(r.pol)
           << ',' << format_double17(r.r.real()) << ',' << format_double17(r.r.imag()) << ','
           << format_double17(r.t.real()) << ',' << format_double17(r.t.imag()) << ','
           << format_double17(std::norm(r.r)) << ',' << format_double17(r.eta.real()) << ','
           << format_double17(r.eta.imag()) << "\n";
    }
}

} // namespace polsheet
