#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qgce/channels.hpp"
#include "qgce/operator_core.hpp"

namespace qgce {

using Json = nlohmann::json;

// Operators on disk are {dim, re, im} with row-major real/imaginary arrays.
Json mat_to_json(const Mat& m);
Mat mat_from_json(const Json& j, const std::string& who);

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j, const std::string& who);

Json rmat_to_json(const RMat& m);
RMat rmat_from_json(const Json& j, const std::string& who);

// {kind: "kraus"|"cq"|"measurement"|"random_unitary"|"block_dephasing"|
//  "ancilla_discard"|"unitary", kind-specific fields}
Channel channel_from_json(const Json& j);

// CSV with 17 significant digits, LF endings, header always written.
std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows);
void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows,
              const std::string& path);
void emit_json(const Json& doc, const std::string& path);

std::string format_double(double v);  // 17 significant digits

}  // namespace qgce
