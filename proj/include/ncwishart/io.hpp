#pragma once

// JSON parameter documents and CSV tables.
//
//   law      {"d": int, "p": real, "omega": [[real]], "sigma": [[real]]}
//   letac    {"parameterization": "letac", "d", "p", "a", "sigma"}
//   g-n      {"parameterization": "gupta-nagar", "d", "k", "Sigma", "Theta"}
//   process  {"d": int, "p": real, "alpha": [[real]], "beta": [[real]],
//             "mode": "strict"|"formal", optional "x0", optional "u"}
//
// Matrices are row-major nested arrays.

#include <optional>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "ncwishart/distribution.hpp"
#include "ncwishart/existence.hpp"
#include "ncwishart/montecarlo.hpp"
#include "ncwishart/process.hpp"

namespace ncwishart::io {

using nlohmann::json;

GeneralMatrix matrix_from_json(const json& j, int d, const char* field);
json matrix_to_json(const Eigen::MatrixXd& m);

WishartParams params_from_json(const json& j);
json params_to_json(const WishartParams& params);

LetacParams letac_from_json(const json& j);
json letac_to_json(const LetacParams& lp);

GuptaNagarParams gupta_nagar_from_json(const json& j);

enum class Parameterization { Gamma, Letac, GuptaNagar };
Parameterization detect_parameterization(const json& j);

struct ProcessDocument {
  WishartProcessParams params;
  PsdMatrix x0;
  std::optional<PsdMatrix> u;
};

// mode_override replaces the document's "mode" when set.
ProcessDocument process_from_json(const json& j,
                                  std::optional<ProcessMode> mode_override = {});
json process_to_json(const WishartProcessParams& params);

json verdict_to_json(const GindikinVerdict& v);

json load_json_file(const std::string& path);

// Shortest round-trip decimal representation.
std::string format_double(double x);

// "k,x_11,x_12,...,x_dd" with one sample per row.
void write_samples_csv(std::ostream& os, std::span<const PsdMatrix> samples);
// "time,x_11,...,x_dd"
void write_path_csv(std::ostream& os, const SamplePath& path);

json grid_report_to_json(std::span<const GridPointResult> rows);

}  // namespace ncwishart::io
