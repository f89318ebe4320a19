// speechenc: block-wise secret-key encryption of speech signals and of the
// first convolutional layer of models that consume them.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "speechenc/cipher.hpp"
#include "speechenc/keys.hpp"
#include "speechenc/matrix_io.hpp"
#include "speechenc/model_enc.hpp"
#include "speechenc/robustness.hpp"
#include "speechenc/stft.hpp"
#include "speechenc/wav.hpp"

namespace {

namespace se = speechenc;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFormat = 2;
constexpr int kExitVerify = 3;

constexpr se::Scalar kVerifyThreshold = 1e-9;

enum class FileKind { wav, matrix };

FileKind sniff_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) se::fail(se::ErrorCode::io, "cannot open " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() == 4 && std::string_view(magic, 4) == "RIFF") return FileKind::wav;
  if (in.gcount() == 4 && std::string_view(magic, 4) == "SPM1") return FileKind::matrix;
  se::fail(se::ErrorCode::io,
           path.string() + " is neither a WAV nor an SPM1 file");
}

se::Signal load_signal(const fs::path& path) {
  if (sniff_file(path) == FileKind::wav) return se::read_wav(path);
  const se::Matrix values = se::read_matrix(path);
  if (values.rows() == 1) {
    se::Signal s;
    s.dims = 1;
    s.data = values;
    return s;
  }
  return se::Signal::spectrogram(values);
}

void store_signal(const se::Signal& signal, FileKind kind, const fs::path& path) {
  if (kind == FileKind::wav)
    se::write_wav(signal, path);
  else
    se::write_matrix(signal.data, path);
}

se::Method parse_method(const std::string& name) {
  const auto method = se::method_from_name(name);
  if (!method)
    se::fail(se::ErrorCode::usage,
             "method must be shuffle, flip, or rom (got '" + name + "')");
  return *method;
}

struct KeygenArgs {
  std::string method;
  std::uint64_t block_size = 0;
  int dims = 1;
  std::uint64_t seed = 0;
  std::string out;
};

struct CryptArgs {
  std::string key, in, out;
};

struct SpectrogramArgs {
  std::string in, out;
  std::uint64_t window = 256, hop = 128;
};

struct EncryptKernelArgs {
  std::string key, out_dir;
  std::vector<std::string> inputs;
};

struct VerifyArgs {
  std::string key, in, kernels;
};

struct RobustnessArgs {
  std::string in, key, out;
  int trials = 100;
  std::uint64_t seed = 1;
};

struct SweepArgs {
  std::string in, out, method;
  std::vector<std::uint64_t> block_sizes;
  std::uint64_t seed = 0;
};

int run_keygen(const KeygenArgs& args) {
  const se::Method method = parse_method(args.method);
  if (args.dims != 1 && args.dims != 2)
    se::fail(se::ErrorCode::usage, "--dims must be 1 or 2");
  const auto M = static_cast<se::Index>(args.block_size);
  const se::KeySpace space = se::keyspace(method, M, args.dims);
  std::cout << "method: " << se::method_name(method) << "\n"
            << "block size: " << M << " (dims " << args.dims << ", n = "
            << space.n << ")\n"
            << "keyspace: " << space.describe() << "\n";
  if (!args.out.empty()) {
    const se::SecretKey key = se::keygen(method, M, args.dims, args.seed);
    se::save_key(key, args.out);
    std::cout << "wrote " << args.out << "\n";
  }
  return kExitOk;
}

int run_crypt(const CryptArgs& args, bool decrypting) {
  const se::SecretKey key = se::load_key(args.key);
  const FileKind kind = sniff_file(args.in);
  const se::Signal input = load_signal(args.in);
  const se::Signal output =
      decrypting ? se::decrypt(input, key) : se::encrypt(input, key);
  store_signal(output, kind, args.out);
  std::cout << (decrypting ? "decrypted " : "encrypted ") << input.F() << "x"
            << input.T() << " -> " << output.F() << "x" << output.T() << " ("
            << se::method_name(se::key_method(key)) << ", M = "
            << se::key_block_size(key) << ")\n";
  return kExitOk;
}

int run_spectrogram(const SpectrogramArgs& args) {
  const se::Signal input = se::read_wav(args.in);
  se::StftConfig cfg;
  cfg.window = static_cast<se::Index>(args.window);
  cfg.hop = static_cast<se::Index>(args.hop);
  const se::Signal spec = se::stft_magnitude(input, cfg);
  se::write_matrix(spec.data, args.out);
  std::cout << "spectrogram " << spec.F() << "x" << spec.T() << " -> "
            << args.out << "\n";
  return kExitOk;
}

int run_encrypt_kernel(const EncryptKernelArgs& args) {
  const se::SecretKey key = se::load_key(args.key);
  se::KernelBank bank;
  for (const std::string& path : args.inputs) {
    se::Kernel kernel;
    kernel.weights = se::read_matrix(path);
    bank.kernels.push_back(std::move(kernel));
  }
  const se::KernelBank encrypted = se::encrypt_kernel(bank, key);
  se::write_kernel_bank(encrypted, args.out_dir);
  std::cout << "encrypted " << encrypted.out_channels() << " kernel(s) -> "
            << args.out_dir << "\n";
  return kExitOk;
}

int run_verify(const VerifyArgs& args) {
  const se::SecretKey key = se::load_key(args.key);
  const se::Signal input = load_signal(args.in);
  const se::KernelBank bank = se::read_kernel_bank(args.kernels);
  const se::Scalar error = se::verify_cancellation(input, bank, key);
  std::printf("max cancellation error: %.3e\n", error);
  return error <= kVerifyThreshold ? kExitOk : kExitVerify;
}

int run_robustness(const RobustnessArgs& args) {
  if (args.trials < 1) se::fail(se::ErrorCode::usage, "--trials must be >= 1");
  const se::SecretKey key = se::load_key(args.key);
  const se::Signal input = load_signal(args.in);
  const se::RobustnessReport report =
      se::wrong_key_sweep(input, key, args.trials, args.seed);

  std::ofstream out(args.out, std::ios::binary);
  if (!out) se::fail(se::ErrorCode::io, "cannot open " + args.out + " for writing");
  report.write_csv(out);

  const se::SummaryStats dec = se::SummaryStats::of(
      report.column(&se::RobustnessTrial::decrypt_dist_norm));
  const se::SummaryStats div =
      se::SummaryStats::of(report.column(&se::RobustnessTrial::divergence));
  std::printf("%d trials -> %s\n", args.trials, args.out.c_str());
  std::printf("decrypt distance (normalized): median %.4f, mean %.4f\n",
              dec.median, dec.mean);
  std::printf("feature divergence: median %.4f, mean %.4f\n", div.median,
              div.mean);
  return kExitOk;
}

int run_sweep(const SweepArgs& args) {
  const se::Method method = parse_method(args.method);
  if (args.block_sizes.empty())
    se::fail(se::ErrorCode::usage, "--block-sizes must not be empty");
  const se::Signal input = load_signal(args.in);
  std::vector<se::Index> sizes;
  for (std::uint64_t m : args.block_sizes)
    sizes.push_back(static_cast<se::Index>(m));
  const auto rows = se::block_size_sweep(input, method, sizes, args.seed);

  std::ofstream out(args.out, std::ios::binary);
  if (!out) se::fail(se::ErrorCode::io, "cannot open " + args.out + " for writing");
  se::write_csv(rows, out);
  std::cout << rows.size() << " block sizes -> " << args.out << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-wise secret-key encryption for speech signals and models"};
  app.require_subcommand(1);

  KeygenArgs keygen_args;
  auto* keygen = app.add_subcommand("keygen", "Generate a secret key");
  keygen->add_option("--method", keygen_args.method, "shuffle, flip, or rom")
      ->required();
  keygen->add_option("--block-size", keygen_args.block_size, "Block size M")
      ->required()
      ->check(CLI::PositiveNumber);
  keygen->add_option("--dims", keygen_args.dims, "1 (waveform) or 2 (spectrogram)")
      ->default_val(1);
  keygen->add_option("--seed", keygen_args.seed, "Key seed")->required();
  keygen->add_option("--out", keygen_args.out, "Key file to write");

  CryptArgs encrypt_args;
  auto* encrypt = app.add_subcommand("encrypt", "Encrypt a WAV or SPM1 file");
  encrypt->add_option("--key", encrypt_args.key, "Key file")->required();
  encrypt->add_option("--in", encrypt_args.in, "Input file")->required();
  encrypt->add_option("--out", encrypt_args.out, "Output file")->required();

  CryptArgs decrypt_args;
  auto* decrypt = app.add_subcommand("decrypt", "Decrypt a WAV or SPM1 file");
  decrypt->add_option("--key", decrypt_args.key, "Key file")->required();
  decrypt->add_option("--in", decrypt_args.in, "Input file")->required();
  decrypt->add_option("--out", decrypt_args.out, "Output file")->required();

  SpectrogramArgs spec_args;
  auto* spectrogram =
      app.add_subcommand("spectrogram", "Magnitude STFT of a WAV file");
  spectrogram->add_option("--in", spec_args.in, "Input WAV")->required();
  spectrogram->add_option("--window", spec_args.window, "Window length")
      ->default_val(256)
      ->check(CLI::PositiveNumber);
  spectrogram->add_option("--hop", spec_args.hop, "Hop length")
      ->default_val(128)
      ->check(CLI::PositiveNumber);
  spectrogram->add_option("--out", spec_args.out, "Output SPM1")->required();

  EncryptKernelArgs kernel_args;
  auto* encrypt_kernel =
      app.add_subcommand("encrypt-kernel", "Encrypt a first-layer kernel bank");
  encrypt_kernel->add_option("--key", kernel_args.key, "Key file")->required();
  encrypt_kernel
      ->add_option("--in", kernel_args.inputs, "Kernel SPM1 file (repeatable)")
      ->required();
  encrypt_kernel->add_option("--out-dir", kernel_args.out_dir, "Output directory")
      ->required();

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand(
      "verify", "Check that encrypted inference matches plain inference");
  verify->add_option("--key", verify_args.key, "Key file")->required();
  verify->add_option("--in", verify_args.in, "Input WAV or SPM1")->required();
  verify->add_option("--kernels", verify_args.kernels, "Kernel bank directory")
      ->required();

  RobustnessArgs robust_args;
  auto* robustness =
      app.add_subcommand("robustness", "Wrong-key sweep over seeded keys");
  robustness->add_option("--in", robust_args.in, "Input WAV or SPM1")->required();
  robustness->add_option("--key", robust_args.key, "Correct key file")->required();
  robustness->add_option("--trials", robust_args.trials, "Number of wrong keys")
      ->default_val(100);
  robustness->add_option("--seed", robust_args.seed, "First wrong-key seed")
      ->default_val(1);
  robustness->add_option("--out", robust_args.out, "Output CSV")->required();

  SweepArgs sweep_args;
  auto* sweep =
      app.add_subcommand("sweep", "Distortion metrics across block sizes");
  sweep->add_option("--in", sweep_args.in, "Input WAV or SPM1")->required();
  sweep->add_option("--method", sweep_args.method, "shuffle, flip, or rom")
      ->required();
  sweep->add_option("--block-sizes", sweep_args.block_sizes, "Comma-separated Ms")
      ->required()
      ->delimiter(',');
  sweep->add_option("--seed", sweep_args.seed, "Key seed base")->default_val(0);
  sweep->add_option("--out", sweep_args.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(keygen)) return run_keygen(keygen_args);
    if (app.got_subcommand(encrypt)) return run_crypt(encrypt_args, false);
    if (app.got_subcommand(decrypt)) return run_crypt(decrypt_args, true);
    if (app.got_subcommand(spectrogram)) return run_spectrogram(spec_args);
    if (app.got_subcommand(encrypt_kernel)) return run_encrypt_kernel(kernel_args);
    if (app.got_subcommand(verify)) return run_verify(verify_args);
    if (app.got_subcommand(robustness)) return run_robustness(robust_args);
    if (app.got_subcommand(sweep)) return run_sweep(sweep_args);
  } catch (const se::Error& e) {
    std::cerr << "error: " << e.category() << ": " << e.what() << "\n";
    return e.code() == se::ErrorCode::usage ? kExitUsage : kExitFormat;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return kExitFormat;
  }
  return kExitUsage;
}
