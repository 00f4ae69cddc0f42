#include "dcemon/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dcemon/errors.hpp"
#include "dcemon/oracle.hpp"

namespace dcemon {

const char* code_version()
{
    return DCEMON_VERSION;
}

std::string format_double(double x, int precision)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, precision);
    return std::string(buf, res.ptr);
}

namespace {

std::string time_header(const CsvOptions& o)
{
    return o.absolute_time ? "t_absolute" : "t_dimensionless";
}

double time_value(double t, double epsilon, const CsvOptions& o)
{
    return o.absolute_time ? t : epsilon * t;
}

}  // namespace

std::string series_csv(const ObservableSeries& s, const CsvOptions& o, const std::vector<OracleColumn>& oracle)
{
    std::ostringstream out;
    out << time_header(o) << ",n_mean,mandel_q,xvar_plus,xvar_minus";
    for (int j = 1; j <= s.n_levels; ++j)
        out << ",P_" << j;
    for (const auto& col : oracle) {
        if (col.values.size() != s.size())
            throw PhysicsError("oracle column " + col.name + " does not match the series length");
        out << ',' << col.name << "_oracle";
    }
    out << '\n';
    const int p = o.precision;
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << format_double(time_value(s.times[i], s.epsilon, o), p) << ',' << format_double(s.n_mean[i], p) << ',';
        if (s.mandel_q[i])
            out << format_double(*s.mandel_q[i], p);
        out << ',' << format_double(s.xvar_plus[i], p) << ',' << format_double(s.xvar_minus[i], p);
        for (double pj : s.level_populations[i])
            out << ',' << format_double(pj, p);
        for (const auto& col : oracle) {
            out << ',';
            if (col.values[i])
                out << format_double(*col.values[i], p);
        }
        out << '\n';
    }
    return out.str();
}

std::string snapshot_csv(const ObservableSeries& s, std::size_t index, const CsvOptions& o)
{
    const auto& snap = s.snapshots.at(index);
    std::ostringstream out;
    out << time_header(o) << ",n,probability\n";
    const std::string t = format_double(time_value(snap.time, s.epsilon, o), o.precision);
    for (std::size_t n = 0; n < snap.probabilities.size(); ++n)
        out << t << ',' << n << ',' << format_double(snap.probabilities[n], o.precision) << '\n';
    return out.str();
}

std::vector<OracleColumn> oracle_columns(const ExperimentConfig& c, const ObservableSeries& s)
{
    std::vector<OracleColumn> cols;
    const auto& terms = c.evolution.initial.terms;
    const bool vacuum = terms.size() == 1 && terms[0].level == 1 && terms[0].photons == 0;
    if (!c.output.oracle || !vacuum || c.evolution.frame != Frame::rwa_interaction || c.modulation.r != 0.0
        || c.evolution.counter_rotating)
        return cols;
    const double beta0 = c.modulation.beta0();
    const auto& det = c.detector;
    if (det.kind == DetectorKind::none) {
        OracleColumn n{"n_mean", {}}, q{"mandel_q", {}}, xp{"xvar_plus", {}}, xm{"xvar_minus", {}};
        for (double t : s.times) {
            const double mean = oracle::empty_cavity_mean_n(beta0, t);
            const auto quad = oracle::empty_cavity_quadratures(beta0, t);
            n.values.push_back(mean);
            q.values.push_back(mean > 0.0 ? std::optional<double>(oracle::empty_cavity_mandel_q(mean)) : std::nullopt);
            xp.values.push_back(quad.plus);
            xm.values.push_back(quad.minus);
        }
        cols = {n, q, xp, xm};
    } else if (det.kind == DetectorKind::harmonic_oscillator && det.omega == c.modulation.omega0
               && oracle::ho_domain(det.g, beta0).ok) {
        OracleColumn xp{"xvar_plus", {}}, xm{"xvar_minus", {}};
        for (double t : s.times) {
            const auto v = oracle::ho_variances(det.g, beta0, t);
            xp.values.push_back(v.xvar_plus);
            xm.values.push_back(v.xvar_minus);
        }
        cols = {xp, xm};
    }
    return cols;
}

std::string manifest_text(const Manifest& manifest)
{
    std::ostringstream out;
    for (const auto& [key, value] : manifest)
        out << key << '=' << value << '\n';
    return out.str();
}

std::string catalog_csv(const std::vector<ResonanceEntry>& entries, int p)
{
    std::ostringstream out;
    out << "r,two_r,regime,max_photons,frequency,formula\n";
    for (const auto& e : entries) {
        out << format_double(e.r, p) << ',' << format_double(2.0 * e.r, p) << ',' << to_string(e.regime.kind) << ',';
        if (e.regime.kind == RegimeKind::bounded)
            out << e.regime.max_photons;
        out << ',';
        if (e.regime.kind == RegimeKind::two_state_oscillation)
            out << format_double(e.regime.frequency, p);
        out << ",\"" << e.formula << "\"\n";
    }
    return out.str();
}

std::string spectrum_csv(const DressedCouplings& c, int p)
{
    std::ostringstream out;
    out << "index,m,k,eigenvalue,level,photons,amplitude\n";
    for (std::size_t i = 0; i < c.states.size(); ++i) {
        const auto& st = c.states[i];
        for (std::size_t b = 0; b < st.basis.size(); ++b)
            out << i << ',' << st.m << ',' << st.k << ',' << format_double(st.eigenvalue, p) << ','
                << st.basis[b].level << ',' << st.basis[b].photons << ',' << format_double(st.amplitudes[b], p)
                << '\n';
    }
    return out.str();
}

std::string coupling_csv(const DressedCouplings& c, int p)
{
    std::ostringstream out;
    out << "row,col,element,gap,resonant\n";
    for (const auto& e : c.entries)
        out << e.row << ',' << e.col << ',' << format_double(e.element, p) << ',' << format_double(e.gap, p) << ','
            << (e.resonant ? 1 : 0) << '\n';
    return out.str();
}

std::string clicks_csv(const std::vector<TrajectoryRecord>& trajectories, const CsvOptions& o, double epsilon)
{
    std::ostringstream out;
    out << "trajectory,seed,click," << time_header(o) << ",channel\n";
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
        const auto& rec = trajectories[i];
        for (std::size_t k = 0; k < rec.click_times.size(); ++k)
            out << i << ',' << rec.seed << ',' << k << ','
                << format_double(time_value(rec.click_times[k], epsilon, o), o.precision) << ','
                << rec.channels[k] + 1 << '\n';
    }
    return out.str();
}

std::string ensemble_csv(const EnsembleSeries& s, const CsvOptions& o, double epsilon)
{
    std::ostringstream out;
    out << time_header(o) << ",n_mean,n_stderr";
    const std::size_t levels = s.level_populations.empty() ? 0 : s.level_populations.front().size();
    for (std::size_t j = 1; j <= levels; ++j)
        out << ",P_" << j << ",P_" << j << "_stderr";
    out << '\n';
    const int p = o.precision;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        out << format_double(time_value(s.times[i], epsilon, o), p) << ',' << format_double(s.n_mean[i], p) << ','
            << format_double(s.n_stderr[i], p);
        for (std::size_t j = 0; j < levels; ++j)
            out << ',' << format_double(s.level_populations[i][j], p) << ','
                << format_double(s.level_stderr[i][j], p);
        out << '\n';
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& contents)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open " + path + " for writing");
    f.write(contents.data(), std::streamsize(contents.size()));
    f.close();
    if (!f)
        throw IoError("failed writing " + path);
}

}  // namespace dcemon
