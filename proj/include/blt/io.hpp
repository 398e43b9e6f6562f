#pragma once

#include <string>

#include "blt/params.hpp"
#include "blt/streaming.hpp"

namespace blt {

// {"degree", "theta", "theta_hat", "n", "meta": {"method", "version", ...}}.
// Residues are not stored. "ra" files are rebuilt from the degree and the
// stored theta is checked against the rebuild.
std::string blt_to_json(const BltFactorization& f);
BltFactorization blt_from_json(const std::string& text);

void save_blt(const BltFactorization& f, const std::string& path);
BltFactorization load_blt(const std::string& path);

enum class NoiseFormat { Csv, F64 };

// CSV: header "step,dim0,...,dim{m-1}". F64: little-endian row-major doubles
// plus a sidecar <path>.json with {n, m, zeta, sigma, seed, rng, factorization_path}.
void write_noise(const NoiseStreamConfig& cfg, NoiseFormat fmt, const std::string& path,
                 const std::string& factorization_path, unsigned threads);

}  // namespace blt
