#include "phasestab/frame_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace phasestab {

namespace {

double number(const nlohmann::json& j, const std::string& where) {
  if (!j.is_number()) throw FrameFormatError(where + ": expected a number");
  return j.get<double>();
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

FiniteFrame parse_frame(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FrameFormatError(std::string("not a JSON document: ") + e.what());
  }
  if (!doc.is_object()) throw FrameFormatError("frame document must be an object");
  for (const char* key : {"field", "dim", "vectors"}) {
    if (!doc.contains(key)) throw FrameFormatError(std::string("missing field '") + key + "'");
  }
  if (!doc["field"].is_string()) throw FrameFormatError("'field' must be a string");
  ScalarField field;
  try {
    field = parse_field(doc["field"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw FrameFormatError(e.what());
  }
  if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1) {
    throw FrameFormatError("'dim' must be a positive integer");
  }
  const Index dim = doc["dim"].get<Index>();
  const auto& rows = doc["vectors"];
  if (!rows.is_array() || rows.empty()) throw FrameFormatError("'vectors' must be a non-empty array");

  CMatrix s(dim, static_cast<Index>(rows.size()));
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const std::string where = "vector " + std::to_string(n + 1);
    const auto& row = rows[n];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
      throw FrameFormatError(where + ": expected " + std::to_string(dim) + " entries");
    }
    for (Index i = 0; i < dim; ++i) {
      const auto& e = row[static_cast<std::size_t>(i)];
      if (field == ScalarField::complex && e.is_array()) {
        if (e.size() != 2) throw FrameFormatError(where + ": complex entries are [re, im] pairs");
        s(i, static_cast<Index>(n)) = Complex{number(e[0], where), number(e[1], where)};
      } else {
        s(i, static_cast<Index>(n)) = number(e, where);
      }
    }
  }
  if (!s.allFinite()) throw FrameFormatError("non-finite entry");
  return FiniteFrame(field, std::move(s));
}

FiniteFrame read_frame_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FrameFormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_frame(ss.str());
}

std::string format_vector(const HVector& v, ScalarField field) {
  std::string out = "[";
  for (Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    if (field == ScalarField::complex) {
      out += "[" + fmt17(v(i).real()) + ", " + fmt17(v(i).imag()) + "]";
    } else {
      out += fmt17(v(i).real());
    }
  }
  return out + "]";
}

std::string format_frame(const FiniteFrame& frame) {
  std::string out = "{\n  \"field\": \"" + std::string(to_string(frame.field())) + "\",\n";
  out += "  \"dim\": " + std::to_string(frame.dim()) + ",\n  \"vectors\": [\n";
  for (Index n = 0; n < frame.size(); ++n) {
    out += "    " + format_vector(frame.vector(n), frame.field());
    out += n + 1 < frame.size() ? ",\n" : "\n";
  }
  return out + "  ]\n}\n";
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << contents;
    out.close();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, target);
}

}  // namespace phasestab
