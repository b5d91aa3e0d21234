#include "ncwishart/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ncwishart/errors.hpp"

namespace ncwishart::io {

namespace {

const json& require(const json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) {
    throw ValidationError(std::string("parameter document is missing \"") +
                          field + "\"");
  }
  return j.at(field);
}

double require_number(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_number()) {
    throw ValidationError(std::string("\"") + field + "\" must be a number");
  }
  return v.get<double>();
}

int require_dim(const json& j) {
  const json& v = require(j, "d");
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ValidationError("\"d\" must be a positive integer");
  }
  return v.get<int>();
}

PsdMatrix psd_field(const json& j, int d, const char* field) {
  try {
    return PsdMatrix(matrix_from_json(require(j, field), d, field));
  } catch (const NotPsdError& e) {
    throw NotPsdError(std::string("\"") + field + "\": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("\"") + field + "\": " + e.what());
  }
}

void write_header(std::ostream& os, const char* first, int d) {
  os << first;
  for (int i = 1; i <= d; ++i) {
    for (int j = 1; j <= d; ++j) os << ",x_" << i << j;
  }
  os << '\n';
}

void write_entries(std::ostream& os, const Eigen::MatrixXd& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) os << ',' << format_double(m(i, j));
  }
}

}  // namespace

GeneralMatrix matrix_from_json(const json& j, int d, const char* field) {
  std::ostringstream shape_error;
  shape_error << "\"" << field << "\" must be a " << d << "x" << d
              << " array of numbers";
  if (!j.is_array() || static_cast<int>(j.size()) != d) {
    throw ValidationError(shape_error.str());
  }
  GeneralMatrix m(d, d);
  for (int i = 0; i < d; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != d) {
      throw ValidationError(shape_error.str());
    }
    for (int k = 0; k < d; ++k) {
      if (!row[k].is_number()) throw ValidationError(shape_error.str());
      m(i, k) = row[k].get<double>();
    }
  }
  return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    out.push_back(std::move(row));
  }
  return out;
}

WishartParams params_from_json(const json& j) {
  const int d = require_dim(j);
  return WishartParams(require_number(j, "p"), psd_field(j, d, "omega"),
                       psd_field(j, d, "sigma"));
}

json params_to_json(const WishartParams& params) {
  return json{{"d", params.dim()},
              {"p", params.p()},
              {"omega", matrix_to_json(params.omega().mat())},
              {"sigma", matrix_to_json(params.sigma().mat())}};
}

LetacParams letac_from_json(const json& j) {
  const int d = require_dim(j);
  return {require_number(j, "p"), psd_field(j, d, "a"),
          psd_field(j, d, "sigma")};
}

json letac_to_json(const LetacParams& lp) {
  return json{{"parameterization", "letac"},
              {"d", lp.sigma.dim()},
              {"p", lp.p},
              {"a", matrix_to_json(lp.a.mat())},
              {"sigma", matrix_to_json(lp.sigma.mat())}};
}

GuptaNagarParams gupta_nagar_from_json(const json& j) {
  const int d = require_dim(j);
  return {require_number(j, "k"), psd_field(j, d, "Sigma"),
          SymMatrix(matrix_from_json(require(j, "Theta"), d, "Theta"))};
}

Parameterization detect_parameterization(const json& j) {
  if (j.is_object() && j.contains("parameterization")) {
    const std::string name = j.at("parameterization").get<std::string>();
    if (name == "gamma") return Parameterization::Gamma;
    if (name == "letac") return Parameterization::Letac;
    if (name == "gupta-nagar") return Parameterization::GuptaNagar;
    throw ValidationError("unknown parameterization \"" + name + "\"");
  }
  if (j.is_object() && j.contains("Theta")) return Parameterization::GuptaNagar;
  if (j.is_object() && j.contains("a")) return Parameterization::Letac;
  return Parameterization::Gamma;
}

ProcessDocument process_from_json(const json& j,
                                  std::optional<ProcessMode> mode_override) {
  const int d = require_dim(j);
  ProcessMode mode = ProcessMode::Strict;
  if (j.contains("mode")) {
    const std::string m = j.at("mode").get<std::string>();
    if (m == "formal") {
      mode = ProcessMode::Formal;
    } else if (m != "strict") {
      throw ValidationError("\"mode\" must be \"strict\" or \"formal\"");
    }
  }
  if (mode_override) mode = *mode_override;
  WishartProcessParams params(require_number(j, "p"),
                              psd_field(j, d, "alpha"),
                              matrix_from_json(require(j, "beta"), d, "beta"),
                              mode);
  PsdMatrix x0 = j.contains("x0") ? psd_field(j, d, "x0") : PsdMatrix::zero(d);
  std::optional<PsdMatrix> u;
  if (j.contains("u")) u = psd_field(j, d, "u");
  return {std::move(params), std::move(x0), std::move(u)};
}

json process_to_json(const WishartProcessParams& params) {
  return json{{"d", params.dim()},
              {"p", params.p()},
              {"alpha", matrix_to_json(params.alpha().mat())},
              {"beta", matrix_to_json(params.beta())},
              {"mode", params.mode() == ProcessMode::Strict ? "strict" : "formal"}};
}

json verdict_to_json(const GindikinVerdict& v) {
  return json{{"status", to_string(v.status)}, {"rule", v.rule}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open input document " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("input document " + path + " is not valid JSON: " +
                          e.what());
  }
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_samples_csv(std::ostream& os, std::span<const PsdMatrix> samples) {
  const int d = samples.empty() ? 0 : samples.front().dim();
  write_header(os, "k", d);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    os << k;
    write_entries(os, samples[k].mat());
    os << '\n';
  }
}

void write_path_csv(std::ostream& os, const SamplePath& path) {
  write_header(os, "time", path.x0.dim());
  for (std::size_t k = 0; k < path.states.size(); ++k) {
    os << format_double(path.times[k]);
    write_entries(os, path.states[k].mat());
    os << '\n';
  }
}

json grid_report_to_json(std::span<const GridPointResult> rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back(json{{"u_id", r.u_id},
                       {"analytic", r.analytic},
                       {"empirical", r.empirical},
                       {"stderr", r.std_error},
                       {"z", r.z}});
  }
  return out;
}

}  // namespace ncwishart::io
