#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "speechenc/keys.hpp"
#include "speechenc/matrix_io.hpp"
#include "speechenc/model_enc.hpp"
#include "speechenc/wav.hpp"
#include "test_util.hpp"

using namespace speechenc;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "speechenc_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_cli(const std::string& args) {
  const fs::path out_path = work_dir() / "stdout.txt";
  const fs::path err_path = work_dir() / "stderr.txt";
  const std::string command = std::string(SPEECHENC_CLI_PATH) + " " + args +
                              " > " + out_path.string() + " 2> " +
                              err_path.string();
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

}  // namespace

TEST_CASE("keygen prints the key-space report") {
  const RunResult r =
      run_cli("keygen --method shuffle --block-size 3 --dims 1 --seed 7");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("keyspace: 6 (2.585 bits)") != std::string::npos);
}

TEST_CASE("keygen writes a loadable key file") {
  const fs::path key = work_dir() / "rom.key.json";
  const RunResult r = run_cli("keygen --method rom --block-size 10 --seed 5 --out " +
                              key.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(key));
  CHECK(slurp(key).find("\"method\": \"rom\"") != std::string::npos);
}

TEST_CASE("encrypt then decrypt restores the WAV bit-for-bit") {
  const fs::path wav = work_dir() / "fixture.wav";
  const fs::path key = work_dir() / "flip.key.json";
  const fs::path enc = work_dir() / "fixture.enc.wav";
  const fs::path dec = work_dir() / "fixture.dec.wav";

  // 16000 samples divides M = 10, so the file round trip needs no trim.
  write_wav(test_util::random_waveform(16000, 21), wav);
  REQUIRE(run_cli("keygen --method flip --block-size 10 --seed 9 --out " +
                  key.string())
              .exit_code == 0);
  REQUIRE(run_cli("encrypt --key " + key.string() + " --in " + wav.string() +
                  " --out " + enc.string())
              .exit_code == 0);
  REQUIRE(run_cli("decrypt --key " + key.string() + " --in " + enc.string() +
                  " --out " + dec.string())
              .exit_code == 0);
  CHECK(slurp(dec) == slurp(wav));
  CHECK(slurp(enc) != slurp(wav));
}

TEST_CASE("encrypt and decrypt round-trip an SPM1 spectrogram") {
  const fs::path spm = work_dir() / "spec.spm1";
  const fs::path key = work_dir() / "shuffle2d.key.json";
  const fs::path enc = work_dir() / "spec.enc.spm1";
  const fs::path dec = work_dir() / "spec.dec.spm1";

  write_matrix(test_util::random_spectrogram(9, 12, 4).data, spm);
  REQUIRE(run_cli("keygen --method shuffle --block-size 3 --dims 2 --seed 2 --out " +
                  key.string())
              .exit_code == 0);
  REQUIRE(run_cli("encrypt --key " + key.string() + " --in " + spm.string() +
                  " --out " + enc.string())
              .exit_code == 0);
  REQUIRE(run_cli("decrypt --key " + key.string() + " --in " + enc.string() +
                  " --out " + dec.string())
              .exit_code == 0);
  CHECK(slurp(dec) == slurp(spm));
}

TEST_CASE("spectrogram subcommand writes the expected SPM1 shape") {
  const fs::path wav = work_dir() / "forspec.wav";
  const fs::path spm = work_dir() / "spec_out.spm1";
  write_wav(test_util::random_waveform(1024, 5), wav);
  const RunResult r = run_cli("spectrogram --in " + wav.string() +
                              " --window 256 --hop 128 --out " + spm.string());
  CHECK(r.exit_code == 0);
  const Matrix spec = read_matrix(spm);
  CHECK(spec.rows() == 129);
  CHECK(spec.cols() == 7);
}

TEST_CASE("verify exits 0 when the key satisfies the cancellation contract") {
  const fs::path wav = work_dir() / "verify.wav";
  const fs::path key = work_dir() / "rom10.key.json";
  const fs::path other_key = work_dir() / "rom10b.key.json";
  const fs::path kernel = work_dir() / "kernel.spm1";
  const fs::path bank_dir = work_dir() / "bank";

  write_wav(test_util::random_waveform(4000, 31), wav);
  write_matrix(test_util::random_spectrogram(1, 10, 8).data, kernel);
  REQUIRE(run_cli("keygen --method rom --block-size 10 --seed 4 --out " +
                  key.string())
              .exit_code == 0);
  REQUIRE(run_cli("keygen --method rom --block-size 10 --seed 5 --out " +
                  other_key.string())
              .exit_code == 0);
  REQUIRE(run_cli("encrypt-kernel --key " + key.string() + " --in " +
                  kernel.string() + " --out-dir " + bank_dir.string())
              .exit_code == 0);

  const RunResult matched = run_cli("verify --key " + key.string() + " --in " +
                                    wav.string() + " --kernels " +
                                    bank_dir.string());
  CHECK(matched.exit_code == 0);
  CHECK(matched.out.find("max cancellation error") != std::string::npos);

  // Cancellation holds for any well-formed key applied to both sides; a
  // different valid key passes too. Detecting model/query key mismatch is
  // what mismatch_probe and the robustness sweep are for.
  const RunResult other = run_cli("verify --key " + other_key.string() +
                                  " --in " + wav.string() + " --kernels " +
                                  bank_dir.string());
  CHECK(other.exit_code == 0);
}

TEST_CASE("verify exits 3 for a key beyond the numeric contract") {
  // A rom matrix corrupted within the load tolerance (defect ~3e-11) but
  // probed with large-amplitude fixtures exceeds the 1e-9 gate.
  RomKey corrupted = keygen_rom(10, 1, 4);
  corrupted.matrix(0, 0) += 4e-11;
  const fs::path key = work_dir() / "corrupt.key.json";
  save_key(SecretKey{corrupted}, key);

  const fs::path wav = work_dir() / "loud.wav";
  write_wav(Signal::waveform(Vector::Constant(40, 1000.0), 16000.0), wav);

  Matrix w(1, 10);
  for (Index i = 0; i < 10; ++i) w(0, i) = (i % 2 == 0) ? 1000.0 : -1000.0;
  const fs::path bank_dir = work_dir() / "loud_bank";
  write_kernel_bank(KernelBank{{Kernel{w, std::nullopt}}}, bank_dir);

  const RunResult r = run_cli("verify --key " + key.string() + " --in " +
                              wav.string() + " --kernels " + bank_dir.string());
  CHECK(r.exit_code == 3);
}

TEST_CASE("robustness subcommand writes the CSV report") {
  const fs::path wav = work_dir() / "robust.wav";
  const fs::path key = work_dir() / "rob.key.json";
  const fs::path csv = work_dir() / "rob.csv";

  write_wav(test_util::random_waveform(400, 9), wav);
  REQUIRE(run_cli("keygen --method rom --block-size 10 --seed 3 --out " +
                  key.string())
              .exit_code == 0);
  const RunResult r = run_cli("robustness --in " + wav.string() + " --key " +
                              key.string() + " --trials 8 --seed 100 --out " +
                              csv.string());
  CHECK(r.exit_code == 0);
  const std::string report = slurp(csv);
  int rows = 0;
  for (char c : report) rows += c == '\n';
  CHECK(rows == 1 + 8 + 6);  // header, trials, summary block
  CHECK(report.find("# summary,divergence,") != std::string::npos);
}

TEST_CASE("sweep subcommand accepts a comma-separated block-size list") {
  const fs::path wav = work_dir() / "sweep.wav";
  const fs::path csv = work_dir() / "sweep.csv";
  write_wav(test_util::random_waveform(1024, 10), wav);
  const RunResult r = run_cli("sweep --in " + wav.string() +
                              " --method shuffle --block-sizes 5,10,20,128 --out " +
                              csv.string());
  CHECK(r.exit_code == 0);
  const std::string report = slurp(csv);
  CHECK(report.find("block_size,") == 0);
  int rows = 0;
  for (char c : report) rows += c == '\n';
  CHECK(rows == 5);
}

TEST_CASE("usage problems exit with code 1") {
  CHECK(run_cli("keygen --method shuffle").exit_code == 1);  // missing flags
  CHECK(run_cli("keygen --method twist --block-size 3 --seed 1").exit_code == 1);
  CHECK(run_cli("frobnicate").exit_code == 1);
  CHECK(run_cli("keygen --method shuffle --block-size 3 --seed 1 --bogus 7")
            .exit_code == 1);
  CHECK(run_cli("").exit_code == 1);  // a subcommand is required
}

TEST_CASE("format problems exit with code 2 and a diagnostic line") {
  const fs::path bad_key = work_dir() / "bad.key.json";
  std::ofstream(bad_key) << "{\"version\": 9}";
  const fs::path wav = work_dir() / "fmt.wav";
  write_wav(test_util::random_waveform(100, 2), wav);

  const RunResult r = run_cli("encrypt --key " + bad_key.string() + " --in " +
                              wav.string() + " --out /dev/null");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("error: KeyFormatError:") != std::string::npos);

  // Key dims disagree with the input signal.
  const fs::path key2d = work_dir() / "k2d.key.json";
  REQUIRE(run_cli("keygen --method flip --block-size 4 --dims 2 --seed 1 --out " +
                  key2d.string())
              .exit_code == 0);
  const RunResult mismatch = run_cli("encrypt --key " + key2d.string() +
                                     " --in " + wav.string() + " --out /dev/null");
  CHECK(mismatch.exit_code == 2);
  CHECK(mismatch.err.find("error: KeyMismatch:") != std::string::npos);

  const RunResult missing =
      run_cli("encrypt --key " + bad_key.string() + " --in /nonexistent.wav "
              "--out /dev/null");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("help is available and exits 0") {
  CHECK(run_cli("--help").exit_code == 0);
  const RunResult sub = run_cli("keygen --help");
  CHECK(sub.exit_code == 0);
  CHECK(sub.out.find("--block-size") != std::string::npos);
}
