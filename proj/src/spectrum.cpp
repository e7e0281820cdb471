#include "bates/spectrum.hpp"

#include "bates/linalg.hpp"
#include "bates/operators.hpp"

#include <algorithm>
#include <cmath>

namespace bates {

double SpectrumExport::max_modulus() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

double SpectrumExport::max_abs_imag() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
    return m;
}

SpectrumExport jump_spectrum(const SpatialGrid& grid, const BatesParams& params, std::string case_label) {
    const JumpBlock jb = jump_block(grid, params);
    SpectrumExport out;
    out.case_label = std::move(case_label);
    out.m1 = grid.m1();
    out.m2 = grid.m2();
    out.values = dense_eigenvalues(jb.interior()).values;
    // deterministic row order in the export
    std::sort(out.values.begin(), out.values.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumExport>& spectra) {
    out << "case,m1,m2,re,im\n";
    const auto old = out.precision(17);
    for (const auto& sp : spectra)
        for (const auto& v : sp.values)
            out << sp.case_label << ',' << sp.m1 << ',' << sp.m2 << ',' << v.real() << ',' << v.imag() << '\n';
    out.precision(old);
}

}  // namespace bates
