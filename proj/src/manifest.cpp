#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "wavescope/error.hpp"
#include "wavescope/ingest.hpp"

namespace wavescope {

using nlohmann::json;

std::string to_string(const RowMode& mode) {
  switch (mode.kind) {
    case RowMode::Kind::RowsMean: return "rows-mean";
    case RowMode::Kind::LastRow: return "last-row";
    case RowMode::Kind::RowIndex: return "row-index:" + std::to_string(mode.index);
  }
  return "rows-mean";
}

RowMode parse_row_mode(const std::string& text) {
  if (text == "rows-mean") return RowMode::rows_mean();
  if (text == "last-row") return RowMode::last_row();
  const std::string prefix = "row-index:";
  if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size()) {
    const std::string digits = text.substr(prefix.size());
    if (digits.find_first_not_of("0123456789") == std::string::npos) {
      return RowMode::row_index(std::stoull(digits));
    }
  }
  throw Error(Errc::InvalidConfig, "row mode '" + text + "' (expected rows-mean, last-row or row-index:K)");
}

namespace {

const std::set<std::string> kManifestKeys = {"model_name", "num_layers", "num_heads", "seq_len",
                                             "dtype",      "row_mode",   "source",    "sequence_id"};

std::size_t positive_field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) {
    throw Error(Errc::ManifestParse, std::string(key) + " must be a positive integer");
  }
  return v.get<std::size_t>();
}

std::string string_field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw Error(Errc::ManifestParse, std::string(key) + " must be a string");
  return v.get<std::string>();
}

}  // namespace

Manifest parse_manifest(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ManifestParse, e.what());
  }
  if (!j.is_object()) throw Error(Errc::ManifestParse, "manifest must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kManifestKeys.count(key)) throw Error(Errc::ManifestParse, "unknown key '" + key + "'");
  }
  for (const auto& key : kManifestKeys) {
    if (!j.contains(key)) throw Error(Errc::ManifestParse, "missing key '" + key + "'");
  }
  Manifest m;
  m.model_name = string_field(j, "model_name");
  m.num_layers = positive_field(j, "num_layers");
  m.num_heads = positive_field(j, "num_heads");
  m.seq_len = positive_field(j, "seq_len");
  try {
    m.dtype = parse_dtype(string_field(j, "dtype"));
    m.row_mode = parse_row_mode(string_field(j, "row_mode"));
  } catch (const Error& e) {
    throw Error(Errc::ManifestParse, e.what());
  }
  m.source = string_field(j, "source");
  m.sequence_id = string_field(j, "sequence_id");
  if (m.row_mode.kind == RowMode::Kind::RowIndex && m.row_mode.index >= m.seq_len) {
    throw Error(Errc::ManifestParse, "row-index " + std::to_string(m.row_mode.index) + " outside seq_len " +
                                         std::to_string(m.seq_len));
  }
  return m;
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

std::string manifest_to_json(const Manifest& m) {
  json j = {
      {"model_name", m.model_name}, {"num_layers", m.num_layers},        {"num_heads", m.num_heads},
      {"seq_len", m.seq_len},       {"dtype", to_string(m.dtype)},      {"row_mode", to_string(m.row_mode)},
      {"source", m.source},         {"sequence_id", m.sequence_id},
  };
  return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << manifest_to_json(manifest);
  if (!out) throw Error(Errc::IoError, "short write to " + path.string());
}

void check_manifest(const Manifest& m, const std::array<std::size_t, 4>& shape) {
  if (shape[2] != shape[3]) {
    throw Error(Errc::ManifestMismatch, "attention matrices must be square, tensor has " + std::to_string(shape[2]) +
                                            "x" + std::to_string(shape[3]));
  }
  if (m.num_layers != shape[0] || m.num_heads != shape[1] || m.seq_len != shape[2]) {
    std::ostringstream os;
    os << "manifest declares [" << m.num_layers << ", " << m.num_heads << ", " << m.seq_len << ", " << m.seq_len
       << "] but tensor is [" << shape[0] << ", " << shape[1] << ", " << shape[2] << ", " << shape[3] << "]";
    throw Error(Errc::ManifestMismatch, os.str());
  }
}

}  // namespace wavescope
