#pragma once

#include <filesystem>

#include "speechenc/cipher.hpp"
#include "speechenc/conv.hpp"

namespace speechenc {

// Applies the query-side block operator to each kernel's flattened weights;
// biases pass through untouched. Requires P == M (PatchSizeMismatch).
KernelBank encrypt_kernel(const KernelBank& bank, const SecretKey& key);

// Max relative deviation between the plain pipeline and the encrypted one:
//   max |A - B| / (1 + |A|)
// over all feature-map entries, where A = forward(signal, bank) and
// B = forward(encrypt(signal), encrypt_kernel(bank)).
Scalar verify_cancellation(const Signal& signal, const KernelBank& bank,
                           const SecretKey& key);

// Relative L2 distance between the feature map of a correctly encrypted
// query and one encrypted with query_key, both through a model encrypted
// with model_key. Exactly 0 when the keys are identical.
Scalar mismatch_probe(const Signal& signal, const KernelBank& bank,
                      const SecretKey& model_key, const SecretKey& query_key);

// Same probe with an unencrypted query.
Scalar mismatch_probe_plain(const Signal& signal, const KernelBank& bank,
                            const SecretKey& model_key);

// Bank directory layout: one SPM1 matrix per kernel plus manifest.json
// listing the files and optional biases.
void write_kernel_bank(const KernelBank& bank,
                       const std::filesystem::path& dir);
KernelBank read_kernel_bank(const std::filesystem::path& dir);

}  // namespace speechenc
