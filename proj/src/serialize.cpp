#include "qgce/serialize.hpp"

#include <cstdio>
#include <fstream>

namespace qgce {

namespace {

std::vector<double> require_array(const Json& j, const std::string& key,
                                  const std::string& who, size_t len) {
  detail::require(j.contains(key) && j[key].is_array(),
                  who + ": missing array field '" + key + "'");
  std::vector<double> out;
  out.reserve(j[key].size());
  for (const auto& v : j[key]) {
    detail::require(v.is_number(), who + ": non-numeric entry in '" + key + "'");
    out.push_back(v.get<double>());
  }
  detail::require(len == 0 || out.size() == len,
                  who + ": wrong length for '" + key + "'");
  return out;
}

}  // namespace

Json mat_to_json(const Mat& m) {
  const int d = static_cast<int>(m.rows());
  Json re = Json::array(), im = Json::array();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < static_cast<int>(m.cols()); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  return Json{{"dim", d}, {"re", re}, {"im", im}};
}

Mat mat_from_json(const Json& j, const std::string& who) {
  detail::require(j.is_object() && j.contains("dim") &&
                      j["dim"].is_number_integer(),
                  who + ": operator needs integer 'dim'");
  const int d = j["dim"].get<int>();
  detail::require(d > 0, who + ": dim must be positive");
  const auto re = require_array(j, "re", who, size_t(d) * d);
  std::vector<double> im(size_t(d) * d, 0.0);
  if (j.contains("im")) im = require_array(j, "im", who, size_t(d) * d);
  Mat m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      m(r, c) = Complex(re[size_t(r) * d + c], im[size_t(r) * d + c]);
  return m;
}

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vec vec_from_json(const Json& j, const std::string& who) {
  detail::require(j.is_array(), who + ": expected a numeric array");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    detail::require(j[i].is_number(), who + ": non-numeric entry");
    v(static_cast<int>(i)) = j[i].get<double>();
  }
  return v;
}

Json rmat_to_json(const RMat& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

RMat rmat_from_json(const Json& j, const std::string& who) {
  detail::require(j.is_array() && !j.empty() && j[0].is_array(),
                  who + ": expected an array of numeric rows");
  const size_t cols = j[0].size();
  RMat m(j.size(), cols);
  for (size_t r = 0; r < j.size(); ++r) {
    detail::require(j[r].is_array() && j[r].size() == cols,
                    who + ": ragged matrix rows");
    for (size_t c = 0; c < cols; ++c) {
      detail::require(j[r][c].is_number(), who + ": non-numeric entry");
      m(static_cast<int>(r), static_cast<int>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

namespace {

std::vector<Mat> mats_from_json(const Json& j, const std::string& key,
                                const std::string& who) {
  detail::require(j.contains(key) && j[key].is_array() && !j[key].empty(),
                  who + ": missing operator list '" + key + "'");
  std::vector<Mat> out;
  for (const auto& item : j[key]) out.push_back(mat_from_json(item, who));
  return out;
}

}  // namespace

Channel channel_from_json(const Json& j) {
  detail::require(j.is_object() && j.contains("kind") && j["kind"].is_string(),
                  "channel: descriptor needs string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "kraus") {
    return Channel::from_kraus(mats_from_json(j, "kraus", "channel/kraus"));
  }
  if (kind == "unitary") {
    detail::require(j.contains("u"), "channel/unitary: missing 'u'");
    return unitary_channel(mat_from_json(j["u"], "channel/unitary"));
  }
  if (kind == "cq") {
    std::vector<DensityOperator> states;
    for (const auto& m : mats_from_json(j, "states", "channel/cq"))
      states.emplace_back(m);
    return cq_channel(states);
  }
  if (kind == "measurement") {
    return measurement_channel(
        mats_from_json(j, "povm", "channel/measurement"));
  }
  if (kind == "random_unitary") {
    return random_unitary_channel(
        mats_from_json(j, "unitaries", "channel/random_unitary"),
        vec_from_json(j.value("weights", Json::array()),
                      "channel/random_unitary weights"));
  }
  if (kind == "block_dephasing") {
    return block_dephasing_channel(
        mats_from_json(j, "projectors", "channel/block_dephasing"));
  }
  if (kind == "ancilla_discard") {
    detail::require(j.contains("dim1") && j.contains("dim0"),
                    "channel/ancilla_discard: needs 'dim1' and 'dim0'");
    return ancilla_discard_channel(j["dim1"].get<int>(), j["dim0"].get<int>());
  }
  detail::require(false, "channel: unknown kind '" + kind + "'");
  return Channel{};
}

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    detail::require(row.size() == header.size(),
                    "emit_csv: row width differs from header");
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << body;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows,
              const std::string& path) {
  write_file(path, format_csv(header, rows));
}

void emit_json(const Json& doc, const std::string& path) {
  write_file(path, doc.dump(2) + "\n");
}

}  // namespace qgce
