#include "qflow/channel_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qflow/errors.hpp"

namespace qflow {
namespace {

using nlohmann::json;

double number_at(const json& node, const std::string& path) {
  if (!node.is_number()) throw ParseError(path, "expected a number");
  return node.get<double>();
}

int integer_at(const json& obj, const char* key, const std::string& path) {
  const std::string p = path + "." + key;
  if (!obj.contains(key)) throw ParseError(p, "missing field");
  const json& node = obj.at(key);
  if (!node.is_number_integer()) throw ParseError(p, "expected an integer");
  return node.get<int>();
}

ComplexMatrix parse_matrix(const json& node, Index dim, const std::string& path) {
  if (!node.is_array()) throw ParseError(path, "expected a list of rows");
  if (static_cast<Index>(node.size()) != dim) {
    throw ParseError(path, "expected " + std::to_string(dim) + " rows, got " + std::to_string(node.size()));
  }
  ComplexMatrix m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    const json& row = node[static_cast<std::size_t>(i)];
    if (!row.is_array()) throw ParseError(rp, "expected a row list");
    if (static_cast<Index>(row.size()) != dim) {
      throw ParseError(rp, "expected " + std::to_string(dim) + " entries, got " + std::to_string(row.size()));
    }
    for (Index j = 0; j < dim; ++j) {
      const std::string ep = rp + "[" + std::to_string(j) + "]";
      const json& e = row[static_cast<std::size_t>(j)];
      if (!e.is_array() || e.size() != 2) throw ParseError(ep, "expected a [re, im] pair");
      m(i, j) = Complex(number_at(e[0], ep + "[0]"), number_at(e[1], ep + "[1]"));
    }
  }
  return m;
}

KrausChannel parse_channel(const json& node, const std::string& path) {
  if (!node.is_object()) throw ParseError(path, "expected a channel object");
  const int d = integer_at(node, "d", path);
  const int arity = integer_at(node, "arity", path);
  if (d < 2) throw ParseError(path + ".d", "site dimension must be >= 2");
  if (arity != 1 && arity != 2) throw ParseError(path + ".arity", "arity must be 1 or 2");
  Index dim = 1;
  for (int i = 0; i < arity; ++i) dim *= d;
  const std::string kp = path + ".kraus";
  if (!node.contains("kraus")) throw ParseError(kp, "missing field");
  const json& kraus = node.at("kraus");
  if (!kraus.is_array() || kraus.empty()) throw ParseError(kp, "expected a non-empty list of matrices");
  std::vector<ComplexMatrix> ops;
  for (std::size_t k = 0; k < kraus.size(); ++k) {
    ops.push_back(parse_matrix(kraus[k], dim, kp + "[" + std::to_string(k) + "]"));
  }
  const double err = trace_preservation_error(ops);
  if (!(err <= 1e-10)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "Kraus set is not trace preserving: |sum K^dag K - 1| = " << err;
    throw ParseError(kp, msg.str());
  }
  return KrausChannel(d, arity, std::move(ops), 1e-10);
}

}  // namespace

ChannelDocument parse_channel_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("$", std::string("malformed JSON: ") + e.what());
  }
  if (doc.is_array()) {
    if (doc.empty() || doc.size() > 2) throw ParseError("$", "expected one or two channel objects");
    ChannelDocument out{parse_channel(doc[0], "$[0]"), std::nullopt};
    if (doc.size() == 2) out.w = parse_channel(doc[1], "$[1]");
    return out;
  }
  if (doc.is_object() && doc.contains("v")) {
    ChannelDocument out{parse_channel(doc.at("v"), "$.v"), std::nullopt};
    if (doc.contains("w")) out.w = parse_channel(doc.at("w"), "$.w");
    return out;
  }
  return ChannelDocument{parse_channel(doc, "$"), std::nullopt};
}

ChannelDocument load_channel_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open channel file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_channel_document(buf.str());
}

std::string channel_to_json(const KrausChannel& ch) {
  json kraus = json::array();
  for (const auto& k : ch.kraus_ops()) {
    json m = json::array();
    for (Index i = 0; i < k.rows(); ++i) {
      json row = json::array();
      for (Index j = 0; j < k.cols(); ++j) row.push_back({k(i, j).real(), k(i, j).imag()});
      m.push_back(row);
    }
    kraus.push_back(m);
  }
  json doc = {{"d", ch.site_dim()}, {"arity", ch.arity()}, {"kraus", kraus}};
  return doc.dump();
}

}  // namespace qflow
