#include "bates/params.hpp"

#include "bates/errors.hpp"

#include <string>

namespace bates {

namespace {
void require(bool ok, const char* what) {
    if (!ok) throw ParameterError(std::string("BatesParams: ") + what);
}
}  // namespace

void BatesParams::validate() const {
    require(std::isfinite(kappa) && kappa > 0.0, "kappa must be > 0");
    require(std::isfinite(eta) && eta > 0.0, "eta must be > 0");
    require(std::isfinite(sigma) && sigma > 0.0, "sigma must be > 0");
    require(std::isfinite(rho) && std::abs(rho) <= 1.0, "|rho| must be <= 1");
    require(std::isfinite(r) && r >= 0.0, "r must be >= 0");
    require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be >= 0");
    require(std::isfinite(gamma), "gamma must be finite");
    require(std::isfinite(delta) && delta > 0.0, "delta must be > 0");
    require(std::isfinite(T) && T > 0.0, "T must be > 0");
    require(std::isfinite(K) && K > 0.0, "K must be > 0");
}

}  // namespace bates
