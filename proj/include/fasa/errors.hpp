#pragma once

#include <stdexcept>
#include <string>

namespace fasa {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define FASA_DEFINE_ERROR(NAME)                       \
    struct NAME : Error {                             \
        using Error::Error;                           \
        NAME() : Error(#NAME) {}                      \
    }

FASA_DEFINE_ERROR(OutsideDomain);
FASA_DEFINE_ERROR(SingularMatrix);
FASA_DEFINE_ERROR(Unbounded);
FASA_DEFINE_ERROR(EmptyDomain);
FASA_DEFINE_ERROR(DegenerateWeights);
FASA_DEFINE_ERROR(UnsupportedDimension);
FASA_DEFINE_ERROR(NonFiniteIntegrand);
FASA_DEFINE_ERROR(NoConvergence);
FASA_DEFINE_ERROR(NotAValuationInstance);
FASA_DEFINE_ERROR(OriginNotInterior);
FASA_DEFINE_ERROR(FlatPoint);
FASA_DEFINE_ERROR(UnsupportedExponent);
FASA_DEFINE_ERROR(EmptySupport);
FASA_DEFINE_ERROR(OutsideDualSupport);
FASA_DEFINE_ERROR(IrregularPoint);
FASA_DEFINE_ERROR(UnsupportedS);
FASA_DEFINE_ERROR(NotEven);
FASA_DEFINE_ERROR(NotNormalized);
FASA_DEFINE_ERROR(DegenerateHessian);
FASA_DEFINE_ERROR(ScenarioError);

#undef FASA_DEFINE_ERROR

}  // namespace fasa
