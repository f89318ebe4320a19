#include "speechenc/model_enc.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "speechenc/matrix_io.hpp"

namespace speechenc {

namespace {

Scalar frobenius(const FeatureMap& map) {
  Scalar sum = 0.0;
  for (const Matrix& channel : map.channels) sum += channel.squaredNorm();
  return std::sqrt(sum);
}

Scalar map_distance(const FeatureMap& a, const FeatureMap& b) {
  Scalar sum = 0.0;
  for (std::size_t c = 0; c < a.channels.size(); ++c)
    sum += (a.channels[c] - b.channels[c]).squaredNorm();
  return std::sqrt(sum);
}

Scalar relative_map_distance(const FeatureMap& reference, const FeatureMap& other) {
  const Scalar dist = map_distance(reference, other);
  if (dist == 0.0) return 0.0;
  const Scalar norm = frobenius(reference);
  return dist / norm;  // +inf for a zero reference map, by design of IEEE
}

}  // namespace

KernelBank encrypt_kernel(const KernelBank& bank, const SecretKey& key) {
  bank.validate();
  if (bank.dims() != key_dims(key))
    fail(ErrorCode::patch_size_mismatch,
         "kernel rank does not match key dims");
  if (bank.patch() != key_block_size(key))
    fail(ErrorCode::patch_size_mismatch,
         "kernel patch size " + std::to_string(bank.patch()) +
             " must equal key block size " +
             std::to_string(key_block_size(key)));

  KernelBank out = bank;
  for (Kernel& kernel : out.kernels) {
    const Vector enc = encrypt_vector(flatten(kernel.weights), key);
    kernel.weights = reshape(enc, kernel.weights.rows(), kernel.weights.cols());
  }
  return out;
}

Scalar verify_cancellation(const Signal& signal, const KernelBank& bank,
                           const SecretKey& key) {
  const Index M = key_block_size(key);
  const FeatureMap plain = first_layer_forward(signal, bank, M);
  const FeatureMap enc =
      first_layer_forward(encrypt(signal, key), encrypt_kernel(bank, key), M);

  Scalar worst = 0.0;
  for (std::size_t c = 0; c < plain.channels.size(); ++c) {
    if (plain.channels[c].size() == 0) continue;
    const Matrix diff = (plain.channels[c] - enc.channels[c]).cwiseAbs();
    worst = std::max(
        worst,
        (diff.array() / (1.0 + plain.channels[c].cwiseAbs().array())).maxCoeff());
  }
  return worst;
}

Scalar mismatch_probe(const Signal& signal, const KernelBank& bank,
                      const SecretKey& model_key, const SecretKey& query_key) {
  if (key_method(model_key) != key_method(query_key) ||
      key_block_size(model_key) != key_block_size(query_key) ||
      key_dims(model_key) != key_dims(query_key))
    fail(ErrorCode::key_mismatch,
         "model and query keys must share method, block size, and dims");
  const Index M = key_block_size(model_key);
  const KernelBank enc_bank = encrypt_kernel(bank, model_key);
  const FeatureMap matched =
      first_layer_forward(encrypt(signal, model_key), enc_bank, M);
  const FeatureMap mismatched =
      first_layer_forward(encrypt(signal, query_key), enc_bank, M);
  return relative_map_distance(matched, mismatched);
}

Scalar mismatch_probe_plain(const Signal& signal, const KernelBank& bank,
                            const SecretKey& model_key) {
  const Index M = key_block_size(model_key);
  const KernelBank enc_bank = encrypt_kernel(bank, model_key);
  const FeatureMap matched =
      first_layer_forward(encrypt(signal, model_key), enc_bank, M);
  const FeatureMap plain_query = first_layer_forward(signal, enc_bank, M);
  return relative_map_distance(matched, plain_query);
}

void write_kernel_bank(const KernelBank& bank,
                       const std::filesystem::path& dir) {
  bank.validate();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());

  std::string manifest = "{\n  \"version\": 1,\n";
  manifest += "  \"rows\": " + std::to_string(bank.kernels.front().rows()) + ",\n";
  manifest += "  \"cols\": " + std::to_string(bank.kernels.front().cols()) + ",\n";
  manifest += "  \"kernels\": [\n";
  for (std::size_t i = 0; i < bank.kernels.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "kernel_%03zu.spm1", i);
    write_matrix(bank.kernels[i].weights, dir / name);
    manifest += std::string("    {\"file\": \"") + name + "\"";
    if (bank.kernels[i].bias) {
      char buffer[64];
      const auto result =
          std::to_chars(buffer, buffer + sizeof buffer, *bank.kernels[i].bias);
      manifest += ", \"bias\": " + std::string(buffer, result.ptr);
    }
    manifest += i + 1 < bank.kernels.size() ? "},\n" : "}\n";
  }
  manifest += "  ]\n}\n";

  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) fail(ErrorCode::io, "cannot write manifest in " + dir.string());
  out << manifest;
}

KernelBank read_kernel_bank(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json", std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open " + (dir / "manifest.json").string());
  std::stringstream buffer;
  buffer << in.rdbuf();

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::matrix_format, std::string("invalid manifest: ") + e.what());
  }
  if (!j.is_object() || !j.contains("version") || !j.contains("kernels") ||
      !j.contains("rows") || !j.contains("cols") || !j["kernels"].is_array() ||
      j["kernels"].empty() || !j["rows"].is_number_unsigned() ||
      !j["cols"].is_number_unsigned())
    fail(ErrorCode::matrix_format, "manifest missing required fields");
  if (!j["version"].is_number_unsigned() || j["version"].get<std::uint64_t>() != 1)
    fail(ErrorCode::matrix_format, "unsupported manifest version");

  KernelBank bank;
  for (const auto& entry : j["kernels"]) {
    if (!entry.is_object() || !entry.contains("file") || !entry["file"].is_string())
      fail(ErrorCode::matrix_format, "manifest kernel entry missing 'file'");
    Kernel kernel;
    kernel.weights = read_matrix(dir / entry["file"].get<std::string>());
    if (entry.contains("bias")) {
      if (!entry["bias"].is_number())
        fail(ErrorCode::matrix_format, "kernel bias must be a number");
      kernel.bias = entry["bias"].get<double>();
    }
    bank.kernels.push_back(std::move(kernel));
  }
  for (const Kernel& kernel : bank.kernels) {
    if (kernel.rows() != static_cast<Index>(j["rows"].get<std::uint64_t>()) ||
        kernel.cols() != static_cast<Index>(j["cols"].get<std::uint64_t>()))
      fail(ErrorCode::matrix_format, "kernel file shape disagrees with manifest");
  }
  bank.validate();
  return bank;
}

}  // namespace speechenc
