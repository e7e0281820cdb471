#pragma once

#include "bates/grid.hpp"
#include "bates/params.hpp"

#include <complex>
#include <ostream>
#include <string>
#include <vector>

namespace bates {

/// Eigenvalues of one interior block of the jump matrix J (the other
/// v-levels repeat the same block).
struct SpectrumExport {
    std::string case_label;
    std::size_t m1 = 0;
    std::size_t m2 = 0;
    std::vector<std::complex<double>> values;

    double max_modulus() const;
    double max_abs_imag() const;
};

SpectrumExport jump_spectrum(const SpatialGrid& grid, const BatesParams& params, std::string case_label = "");

/// CSV with header `case,m1,m2,re,im`, one row per eigenvalue.
void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumExport>& spectra);

}  // namespace bates
