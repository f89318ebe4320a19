#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "speechenc/blocking.hpp"
#include "speechenc/keys.hpp"

namespace speechenc {

namespace {

constexpr Scalar kOrthogonalityTolerance = 1e-10;

// Shortest decimal that parses back to the identical 64-bit value. Zeros get
// an explicit fraction so "-0" is not read back as the integer 0.
std::string shortest_decimal(double value) {
  if (value == 0.0) return std::signbit(value) ? "-0.0" : "0.0";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

void append_payload(std::string& out, const ShuffleKey& key) {
  for (std::size_t i = 0; i < key.perm.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(key.perm[i]);
  }
}

void append_payload(std::string& out, const FlipKey& key) {
  for (std::size_t i = 0; i < key.bits.size(); ++i) {
    if (i) out += ", ";
    out += key.bits[i] ? '1' : '0';
  }
}

void append_payload(std::string& out, const RomKey& key) {
  const Scalar* values = key.matrix.data();  // row-major
  for (Index i = 0; i < key.matrix.size(); ++i) {
    if (i) out += ", ";
    out += shortest_decimal(values[i]);
  }
}

[[noreturn]] void malformed(const std::string& detail) {
  fail(ErrorCode::key_format, detail);
}

std::uint64_t require_uint(const nlohmann::json& j, const char* field) {
  if (!j.is_number_unsigned())
    malformed(std::string("field '") + field +
              "' must be a nonnegative integer");
  return j.get<std::uint64_t>();
}

}  // namespace

void save_key(const SecretKey& key, const std::filesystem::path& path) {
  const Index M = key_block_size(key);
  const int dims = key_dims(key);
  const Index n = block_elems_for(M, dims);
  if (std::holds_alternative<RomKey>(key)) {
    const RomKey& rom = std::get<RomKey>(key);
    if (!rom.matrix.allFinite())
      fail(ErrorCode::key_format, "rom matrix contains NaN or Inf");
  }

  std::string text = "{\n";
  text += "  \"version\": 1,\n";
  text += std::string("  \"method\": \"") + method_name(key_method(key)) + "\",\n";
  text += "  \"block_size\": " + std::to_string(M) + ",\n";
  text += "  \"dims\": " + std::to_string(dims) + ",\n";
  text += "  \"n\": " + std::to_string(n) + ",\n";
  if (const auto seed = key_seed(key))
    text += "  \"seed\": " + std::to_string(*seed) + ",\n";
  text += "  \"payload\": [";
  std::visit([&](const auto& k) { append_payload(text, k); }, key);
  text += "]\n}\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) fail(ErrorCode::io, "failed writing " + path.string());
}

SecretKey load_key(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::exception& e) {
    malformed(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) malformed("top level must be an object");

  static const char* const kAllowed[] = {"version", "method", "block_size",
                                         "dims",    "n",      "seed",
                                         "payload"};
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* name : kAllowed) known = known || item.key() == name;
    if (!known) malformed("unknown field '" + item.key() + "'");
  }
  for (const char* name : {"version", "method", "block_size", "dims", "n", "payload"})
    if (!j.contains(name)) malformed(std::string("missing field '") + name + "'");

  if (require_uint(j["version"], "version") != 1)
    malformed("unsupported version");
  if (!j["method"].is_string()) malformed("field 'method' must be a string");
  const auto method = method_from_name(j["method"].get<std::string>());
  if (!method) malformed("unknown method '" + j["method"].get<std::string>() + "'");

  const auto M = static_cast<Index>(require_uint(j["block_size"], "block_size"));
  if (M < 1) malformed("block_size must be >= 1");
  const auto dims = static_cast<int>(require_uint(j["dims"], "dims"));
  if (dims != 1 && dims != 2) malformed("dims must be 1 or 2");
  const auto n = static_cast<Index>(require_uint(j["n"], "n"));
  if (n != block_elems_for(M, dims))
    malformed("n = " + std::to_string(n) + " does not match block_size/dims");

  std::optional<std::uint64_t> seed;
  if (j.contains("seed")) seed = require_uint(j["seed"], "seed");

  const nlohmann::json& payload = j["payload"];
  if (!payload.is_array()) malformed("field 'payload' must be an array");

  const auto payload_size = static_cast<Index>(payload.size());
  switch (*method) {
    case Method::shuffle: {
      if (payload_size != n) malformed("shuffle payload must have n entries");
      ShuffleKey key{M, dims, {}, seed};
      key.perm.reserve(payload.size());
      std::vector<bool> seen(payload.size(), false);
      for (const auto& entry : payload) {
        if (!entry.is_number_unsigned())
          malformed("shuffle payload entries must be nonnegative integers");
        const auto index = entry.get<std::uint64_t>();
        if (index >= payload.size() || seen[index])
          malformed("shuffle payload is not a permutation of 0..n-1");
        seen[index] = true;
        key.perm.push_back(static_cast<Index>(index));
      }
      return key;
    }
    case Method::flip: {
      if (payload_size != n) malformed("flip payload must have n entries");
      FlipKey key{M, dims, {}, seed};
      key.bits.reserve(payload.size());
      for (const auto& entry : payload) {
        if (!entry.is_number_unsigned() || entry.get<std::uint64_t>() > 1)
          malformed("flip payload entries must be 0 or 1");
        key.bits.push_back(static_cast<std::uint8_t>(entry.get<std::uint64_t>()));
      }
      return key;
    }
    case Method::rom: {
      if (payload_size != n * n) malformed("rom payload must have n*n entries");
      RomKey key{M, dims, Matrix(n, n), seed};
      Scalar* values = key.matrix.data();  // row-major
      for (std::size_t i = 0; i < payload.size(); ++i) {
        if (!payload[i].is_number())
          malformed("rom payload entries must be numbers");
        values[i] = payload[i].get<double>();
      }
      if (!key.matrix.allFinite()) malformed("rom matrix has NaN or Inf");
      const Scalar defect = orthogonality_defect(key.matrix);
      if (defect > kOrthogonalityTolerance)
        malformed("rom matrix is not orthogonal (defect " +
                  std::to_string(defect) + ")");
      return key;
    }
  }
  malformed("unreachable");
}

}  // namespace speechenc
