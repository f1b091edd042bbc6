#pragma once

// File formats.
//
//   field      CSV `theta,phi,weight,v0[,v1,v2]`, one row per node in
//              theta-major order, 17 significant digits; sidecar
//              `<path>.json` with format_version, grid kind/parameters, channels.
//   pyramid    JSON {format_version, L, channels, convention: "complex-CS",
//              ordering: "l-major", coeffs: [[re, im], ...]} channel-major.
//   spectrum   CSV `l,m,channel,re,im,energy` in canonical order.
//   SHE curve  CSV `J,SHE,cumulative_energy_fraction`.
//   report     JSON order-selection report.
// CSV outputs other than the field file start with `# format_version=1`.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>  // nlohmann/json (vendor/)

#include "entropy.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "transform.hpp"

namespace shent {

inline constexpr int kFormatVersion = 1;

namespace detail {

inline std::string fmt17(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    parts.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline double parse_double(std::string_view s, std::size_t line_no, std::string_view column) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError("cannot parse " + std::string(column) + " value '" + std::string(s) + "'", line_no);
  return v;
}

}  // namespace detail

inline std::filesystem::path sidecar_path(const std::filesystem::path& field_path) {
  return std::filesystem::path(field_path.string() + ".json");
}

inline void write_field(const std::filesystem::path& path, const SampledSphericalField& field) {
  field.validate();
  {
    auto out = detail::open_out(path);
    out << "theta,phi,weight";
    for (int c = 0; c < field.channels; ++c) out << ",v" << c;
    out << '\n';
    for (std::size_t i = 0; i < field.node_count(); ++i) {
      out << detail::fmt17(field.grid.theta(i)) << ',' << detail::fmt17(field.grid.phi(i)) << ','
          << detail::fmt17(field.grid.weight(i));
      for (int c = 0; c < field.channels; ++c) out << ',' << detail::fmt17(field.at(i, c));
      out << '\n';
    }
    detail::finish(out, path);
  }
  nlohmann::json side = {
      {"format_version", kFormatVersion},
      {"grid",
       {{"kind", to_string(field.grid.kind())},
        {"band_limit", field.grid.band_limit()},
        {"n_theta", field.grid.n_theta()},
        {"n_phi", field.grid.n_phi()}}},
      {"channels", field.channels},
      {"nodes", field.node_count()},
  };
  const auto sp = sidecar_path(path);
  auto out = detail::open_out(sp);
  out << side.dump(2) << '\n';
  detail::finish(out, sp);
}

inline SampledSphericalField read_field(const std::filesystem::path& path) {
  GridKind kind = GridKind::External;
  int band_limit = -1;
  std::size_t expect_theta = 0, expect_phi = 0;
  if (const auto sp = sidecar_path(path); std::filesystem::exists(sp)) {
    auto in = detail::open_in(sp);
    nlohmann::json side;
    try {
      in >> side;
      if (side.at("format_version").get<int>() != kFormatVersion)
        throw ParseError("unsupported field format_version in '" + sp.string() + "'");
      kind = grid_kind_from_string(side.at("grid").at("kind").get<std::string>());
      band_limit = side.at("grid").at("band_limit").get<int>();
      expect_theta = side.at("grid").at("n_theta").get<std::size_t>();
      expect_phi = side.at("grid").at("n_phi").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("bad sidecar '" + sp.string() + "': " + e.what());
    }
  }

  auto in = detail::open_in(path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty field file", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  int channels = 0;
  if (line == "theta,phi,weight,v0")
    channels = 1;
  else if (line == "theta,phi,weight,v0,v1,v2")
    channels = 3;
  else
    throw ParseError("expected header 'theta,phi,weight,v0[,v1,v2]', got '" + line + "'", line_no);

  std::vector<double> node_theta, node_phi, weights, values;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto parts = detail::split_commas(line);
    if (parts.size() != static_cast<std::size_t>(3 + channels))
      throw ParseError("row has " + std::to_string(parts.size()) + " columns, expected " + std::to_string(3 + channels),
                       line_no);
    node_theta.push_back(detail::parse_double(parts[0], line_no, "theta"));
    node_phi.push_back(detail::parse_double(parts[1], line_no, "phi"));
    weights.push_back(detail::parse_double(parts[2], line_no, "weight"));
    for (int c = 0; c < channels; ++c) {
      const double v = detail::parse_double(parts[static_cast<std::size_t>(3 + c)], line_no, "value");
      if (!std::isfinite(v)) throw ParseError("non-finite sample", line_no);
      values.push_back(v);
    }
  }
  if (node_theta.empty()) throw ParseError("field file has no data rows", line_no);

  // Recover the product structure: phis from the first theta row.
  std::size_t n_phi = 0;
  while (n_phi < node_theta.size() && node_theta[n_phi] == node_theta[0]) ++n_phi;
  if (node_theta.size() % n_phi != 0) throw ParseError("rows do not form a theta x phi product grid");
  const std::size_t n_theta = node_theta.size() / n_phi;
  std::vector<double> thetas(n_theta), phis(node_phi.begin(), node_phi.begin() + static_cast<std::ptrdiff_t>(n_phi));
  for (std::size_t i = 0; i < node_theta.size(); ++i) {
    const std::size_t it = i / n_phi, ip = i % n_phi;
    if (ip == 0) thetas[it] = node_theta[i];
    if (node_theta[i] != thetas[it] || node_phi[i] != phis[ip])
      throw ParseError("node breaks the theta-major product grid", i + 2);
  }
  if (expect_theta && (expect_theta != n_theta || expect_phi != n_phi))
    throw ParseError("grid is " + std::to_string(n_theta) + " x " + std::to_string(n_phi) + " but sidecar says " +
                     std::to_string(expect_theta) + " x " + std::to_string(expect_phi));

  for (std::size_t i = 0; i < weights.size(); ++i)
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) throw ParseError("weight must be positive", i + 2);

  constexpr double four_pi = 4.0 * std::numbers::pi;
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  double reference = four_pi, tol = 1e-3 * four_pi;
  if (kind == GridKind::GaussLegendre) {
    if (band_limit < 0 || n_theta != static_cast<std::size_t>(band_limit + 1) ||
        n_phi != static_cast<std::size_t>(2 * band_limit + 2))
      throw ParseError("gauss grid dimensions do not match band limit " + std::to_string(band_limit));
    tol = 1e-10 * four_pi;
  } else if (kind == GridKind::Equiangular) {
    reference = equiangular_grid(static_cast<int>(n_theta), static_cast<int>(n_phi)).weight_sum();
    tol = 1e-10 * four_pi;
  }
  if (std::abs(wsum - reference) > tol)
    throw ParseError("weight sum " + detail::fmt17(wsum) + " fails validation against " + detail::fmt17(reference));

  SphereGrid grid(kind, kind == GridKind::GaussLegendre ? band_limit : -1, std::move(thetas), std::move(phis),
                  std::move(weights));
  return SampledSphericalField(std::move(grid), channels, std::move(values));
}

inline nlohmann::json pyramid_to_json(const CoefficientPyramid& pyr) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& s : pyr.coeffs()) coeffs.push_back({s.real(), s.imag()});
  return {{"format_version", kFormatVersion}, {"L", pyr.band_limit()},      {"channels", pyr.channels()},
          {"convention", "complex-CS"},       {"ordering", "l-major"},      {"coeffs", std::move(coeffs)}};
}

inline CoefficientPyramid pyramid_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format_version").get<int>() != kFormatVersion) throw ParseError("unsupported pyramid format_version");
    if (j.at("convention").get<std::string>() != "complex-CS") throw ParseError("unsupported coefficient convention");
    if (j.at("ordering").get<std::string>() != "l-major") throw ParseError("unsupported coefficient ordering");
    const int L = j.at("L").get<int>();
    const int channels = j.at("channels").get<int>();
    std::vector<Complex> coeffs;
    for (const auto& c : j.at("coeffs")) {
      if (!c.is_array() || c.size() != 2) throw ParseError("coefficient entries must be [re, im]");
      coeffs.emplace_back(c[0].get<double>(), c[1].get<double>());
    }
    return CoefficientPyramid(L, channels, std::move(coeffs));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad pyramid document: ") + e.what());
  } catch (const ShapeMismatchError& e) {
    throw ParseError(e.what());
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  auto out = detail::open_out(path);
  out << doc.dump(2) << '\n';
  detail::finish(out, path);
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

inline void write_pyramid(const std::filesystem::path& path, const CoefficientPyramid& pyr) {
  write_json(path, pyramid_to_json(pyr));
}

inline CoefficientPyramid read_pyramid(const std::filesystem::path& path) { return pyramid_from_json(read_json(path)); }

inline nlohmann::json real_coefficients_to_json(const CoefficientPyramid& pyr) {
  nlohmann::json channels = nlohmann::json::array();
  for (int c = 0; c < pyr.channels(); ++c) {
    const auto rc = to_real_coefficients(pyr, c);
    nlohmann::json rows = nlohmann::json::array();
    for (int n = 0; n <= rc.band_limit; ++n)
      for (int m = 0; m <= n; ++m) {
        const auto k = RealCoefficients::real_index(n, m);
        rows.push_back({{"n", n}, {"m", m}, {"a", rc.a[k]}, {"b", rc.b[k]}});
      }
    channels.push_back(std::move(rows));
  }
  return {{"format_version", kFormatVersion},
          {"L", pyr.band_limit()},
          {"convention", "real-cos-sin-legendre-CS"},
          {"channels", std::move(channels)}};
}

inline void write_spectrum(const std::filesystem::path& path, const CoefficientPyramid& pyr) {
  auto out = detail::open_out(path);
  out << "# format_version=" << kFormatVersion << '\n' << "l,m,channel,re,im,energy\n";
  for (int c = 0; c < pyr.channels(); ++c)
    for (int l = 0; l <= pyr.band_limit(); ++l)
      for (int m = -l; m <= l; ++m) {
        const Complex s = pyr(l, m, c);
        out << l << ',' << m << ',' << c << ',' << detail::fmt17(s.real()) << ',' << detail::fmt17(s.imag()) << ','
            << detail::fmt17(std::norm(s)) << '\n';
      }
  detail::finish(out, path);
}

inline void write_she_curve(const std::filesystem::path& path, const SheCurve& curve) {
  auto out = detail::open_out(path);
  out << "# format_version=" << kFormatVersion << '\n' << "J,SHE,cumulative_energy_fraction\n";
  for (std::size_t J = 0; J < curve.values.size(); ++J)
    out << J << ',' << detail::fmt17(curve.values[J]) << ',' << detail::fmt17(curve.cumulative_energy_fraction[J])
        << '\n';
  detail::finish(out, path);
}

inline nlohmann::json report_to_json(const OrderSelectionReport& rep) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& r : rep.trace)
    trace.push_back(
        {{"J", r.order}, {"she", r.she}, {"delta", r.delta}, {"degenerate", r.degenerate}, {"decision", r.decision}});
  return {{"format_version", kFormatVersion},
          {"selected_order", rep.selected_order},
          {"criterion", to_string(rep.criterion)},
          {"epsilon", rep.epsilon},
          {"window", rep.window},
          {"band_limit", rep.band_limit},
          {"log_base", to_string(rep.log_base)},
          {"trace", std::move(trace)}};
}

inline void write_report(const std::filesystem::path& path, const OrderSelectionReport& rep) {
  write_json(path, report_to_json(rep));
}

}  // namespace shent
