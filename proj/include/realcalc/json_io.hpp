#pragma once

#include <filesystem>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "realcalc/calculus.hpp"
#include "realcalc/iso_nd.hpp"
#include "realcalc/lie_rep.hpp"
#include "realcalc/matrix_core.hpp"
#include "realcalc/metric_conn.hpp"
#include "realcalc/projection.hpp"
#include "realcalc/report.hpp"

// Wire format: a complex number is [re, im] (a bare number is read as real), a
// matrix is a list of rows, a row vector is a flat list. Every decode_* function
// throws ParseError on malformed input.

namespace realcalc::json_io {

using Json = nlohmann::json;

[[nodiscard]] Json read_file(const std::filesystem::path& path);
[[nodiscard]] Json parse(std::string_view text);

[[nodiscard]] Complex decode_complex(const Json& j);
[[nodiscard]] ComplexMatrix decode_matrix(const Json& j);
[[nodiscard]] RowVector decode_row(const Json& j);
[[nodiscard]] RealMatrix decode_real_matrix(const Json& j);

[[nodiscard]] Json encode(Complex z);
[[nodiscard]] Json encode(const ComplexMatrix& m);
[[nodiscard]] Json encode(const RowVector& v);
[[nodiscard]] Json encode(const RealMatrix& m);

/// {"dim", "N", "structure_constants": n x n x n nested or [], "Dhat": [matrix, ...]}
[[nodiscard]] MatrixRep decode_rep(const Json& j);
[[nodiscard]] Json encode(const MatrixRep& rep);

/// {"rep", "module_rank", "phi": [row, ...]}
[[nodiscard]] CalculusInstance decode_instance(const Json& j);
[[nodiscard]] Json encode(const CalculusInstance& c);

/// {"rep", "basis_images": [[matrix per slot], ...]}
[[nodiscard]] FreeCalculusInstance decode_free_instance(const Json& j);
[[nodiscard]] Json encode(const FreeCalculusInstance& f);

using AnyInstance = std::variant<CalculusInstance, FreeCalculusInstance>;
/// Free when the object has "basis_images".
[[nodiscard]] AnyInstance decode_any_instance(const Json& j);

/// {"kind": "scalar", "x"} | {"kind": "aligned", "Mtilde", "v0", "alphas"} | {"kind": "free", "hblocks"}
[[nodiscard]] Metric decode_metric(const Json& j);
[[nodiscard]] Json encode(const Metric& m);

/// {"kind": "lambda_scalar", "lambda"} | {"kind": "lambda_tensor", "lambda": [k][i][j]} |
/// {"kind": "christoffel", "gamma": [k][i][j] matrices}
[[nodiscard]] ConnectionSpec decode_connection(const Json& j, std::size_t N = 0);
[[nodiscard]] Json encode(const ConnectionSpec& c);

/// {"U", "psi", "X"}
[[nodiscard]] IsoWitness decode_witness(const Json& j);
[[nodiscard]] Json encode(const IsoWitness& w);

/// {"pblocks": [[matrix, ...], ...]}
[[nodiscard]] ProjectionSpec decode_projection(const Json& j);
[[nodiscard]] Json encode(const ProjectionSpec& p);

/// {"passed", "checks": [{"name", "passed", "residual", "detail"}]}
[[nodiscard]] Json encode(const ValidationReport& r);

}  // namespace realcalc::json_io
