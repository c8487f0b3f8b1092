#include "endemic_delay/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace edelay::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_safe(std::string text) {
  for (char& ch : text) {
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ' ';
  }
  return text;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, std::size_t stride,
                          std::span<const Column> extra) {
  if (stride == 0) throw std::invalid_argument("output stride must be >= 1");
  out << "t";
  for (auto name : kCompartmentNames) out << ',' << name;
  out << ",N";
  for (const auto& col : extra) out << ',' << col.name;
  out << '\n';

  auto row = [&](std::size_t k) {
    const CompartmentState x = traj.state(k);
    out << format_double(traj.times()[k]);
    for (Compartment c : kAllCompartments) out << ',' << format_double(x[c]);
    out << ',' << format_double(x.total());
    for (const auto& col : extra) out << ',' << format_double(col.value(k));
    out << '\n';
  };
  const std::size_t n = traj.size();
  for (std::size_t k = 0; k < n; k += stride) row(k);
  if (n > 0 && (n - 1) % stride != 0) row(n - 1);
}

void write_comb_csv(std::ostream& out, const DiracComb& comb) {
  out << "node,weight\n";
  for (std::size_t i = 0; i < comb.size(); ++i) {
    out << format_double(comb.nodes[i]) << ',' << format_double(comb.weights[i]) << '\n';
  }
}

void write_report_csv(std::ostream& out, const ConvergenceReport& report, bool include_timing) {
  out << "n_tau,n_rho";
  for (auto name : kCompartmentNames) out << ",err_" << name;
  out << ",rel_err_I";
  if (include_timing) out << ",wall_ms";
  out << ",status\n";
  for (const auto& e : report.entries) {
    out << e.pair.n_tau << ',' << e.pair.n_rho;
    for (double v : e.sup_err) out << ',' << format_double(v);
    out << ',' << format_double(e.rel_sup_err[index(Compartment::I)]);
    if (include_timing) out << ',' << format_double(std::round(e.wall_seconds * 1e6) / 1e3);
    out << ',' << (e.ok() ? std::string("ok") : csv_safe(e.failure)) << '\n';
  }
}

void write_timing_csv(std::ostream& out, std::span<const TimingRow> rows) {
  out << "solver,n_tau,n_rho,t_end,step,best_ms\n";
  for (const auto& r : rows) {
    out << r.solver << ',';
    if (r.solver == "discrete") {
      out << r.pair.n_tau << ',' << r.pair.n_rho;
    } else {
      out << ',';
    }
    out << ',' << format_double(r.t_end) << ',' << format_double(r.step) << ','
        << format_double(std::round(r.best_seconds * 1e6) / 1e3) << '\n';
  }
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace edelay::io
