#include "thetawave/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace theta {

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_field_snapshot(const std::filesystem::path& path, const Field& f,
                          double time, double theta_val) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const Grid& g = f.grid();
  out << g.n << ',' << format_full(g.length) << ',' << format_full(g.origin)
      << ',' << format_full(time) << ',' << format_full(theta_val) << '\n';
  for (int i = 0; i < g.n; ++i)
    out << format_full(g.x(i)) << ',' << format_full(f[i]) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

FieldSnapshot read_field_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty snapshot: " + path.string());
  std::istringstream hdr(line);
  std::string tok;
  std::vector<std::string> toks;
  while (std::getline(hdr, tok, ',')) toks.push_back(tok);
  if (toks.size() != 5)
    throw std::runtime_error("bad snapshot header: " + path.string());
  const int n = std::stoi(toks[0]);
  Grid g = make_grid(n, std::stod(toks[1]), std::stod(toks[2]));
  FieldSnapshot snap{Field(g), std::stod(toks[3]), std::stod(toks[4])};
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("truncated snapshot: " + path.string());
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("bad snapshot row: " + path.string());
    snap.field[i] = std::stod(line.substr(comma + 1));
  }
  return snap;
}

namespace {
void put_opt(std::ostream& out, const std::optional<double>& v) {
  if (v) out << format_full(*v);
}
}  // namespace

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<DiagnosticsRecord>& recs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "time,mass_u,mass_m,h1_sq,m_l2_sq,lp_momentum,dhh,sup_u,sup_ux,"
         "min_ux,sign_ok\n";
  for (const auto& r : recs) {
    out << format_full(r.time) << ',' << format_full(r.mass_u) << ','
        << format_full(r.mass_m) << ',' << format_full(r.h1_sq) << ','
        << format_full(r.m_l2_sq) << ',';
    put_opt(out, r.lp_momentum);
    out << ',';
    put_opt(out, r.dhh);
    out << ',' << format_full(r.sup_u) << ',' << format_full(r.sup_ux) << ','
        << format_full(r.min_ux) << ',';
    if (r.sign_consistent) out << (*r.sign_consistent ? "1" : "0");
    out << '\n';
  }
}

void write_paths_csv(const std::filesystem::path& path,
                     const std::vector<CharacteristicPath>& paths) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "time,alpha,x,F,m_along\n";
  for (const auto& p : paths) {
    for (size_t i = 0; i < p.times.size(); ++i) {
      out << format_full(p.times[i]) << ',' << format_full(p.alpha) << ','
          << format_full(p.x[i]) << ',' << format_full(p.jacobian[i]) << ','
          << format_full(p.m_along[i]) << '\n';
    }
  }
}

void write_riccati_csv(const std::filesystem::path& path,
                       const RiccatiTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "time,d,lhs_residual,regime,t_star\n";
  const char* regime = trace.regime == RiccatiRegime::SignCondition
                           ? "sign-condition"
                           : "slope-only";
  for (size_t i = 0; i < trace.times.size(); ++i) {
    out << format_full(trace.times[i]) << ',' << format_full(trace.d[i]) << ','
        << format_full(trace.lhs_residual[i]) << ',' << regime << ',';
    if (trace.t_star) out << format_full(*trace.t_star);
    out << '\n';
  }
}

std::filesystem::path output_root(const std::string& fallback) {
  if (const char* env = std::getenv("THETA_WAVE_OUT"))
    if (*env) return std::filesystem::path(env);
  return std::filesystem::path(fallback);
}

}  // namespace theta
