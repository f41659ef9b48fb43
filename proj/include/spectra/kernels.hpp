#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace spectra::kernels {

// Hot loops of the Bloch oracle. Each has a scalar reference and optional AVX2 / NEON
// versions; the active table is chosen once at first use.
struct Table {
    // #{E_i ≤ λ} + #{E_i < λ}: twice the averaged count.
    std::size_t (*count_le_lt)(const double* E, std::size_t n, double lambda);
    // Σ w_i ([E_i ≤ λ] + [E_i < λ]).
    double (*sum_weights_le_lt)(const double* E, const double* w, std::size_t n, double lambda);
    // out_i = (k0 + m0_i)² + (k1 + m1_i)²; m1 may be null for d = 1.
    void (*shifted_norm_sq)(const double* m0, const double* m1, std::size_t n, double k0, double k1, double* out);
    // Σ (a_i)(p_i) for split complex arrays.
    std::complex<double> (*complex_dot)(const double* are, const double* aim, const double* pre, const double* pim,
                                        std::size_t n);
    const char* name;
};

const Table& scalar_table();
// Null when the variant is not compiled in or not supported by this CPU.
const Table* avx2_table();
const Table* neon_table();

// Honors SPECTRA_SIMD = scalar | avx2 | neon | auto (default auto).
const Table& active();
std::string active_name();
// Switch the active table by name; false when that variant is unavailable. Not meant to be
// called while an oracle run is in flight.
bool select(const std::string& name);

}  // namespace spectra::kernels
