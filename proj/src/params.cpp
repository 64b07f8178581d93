#include "monfermi/params.hpp"

namespace monfermi {

std::string to_string(ModelKind m) {
  return m == ModelKind::FermionCounting ? "fc" : "om";
}

ModelKind model_from_string(const std::string& s) {
  if (s == "fc" || s == "fermion_counting") return ModelKind::FermionCounting;
  if (s == "om" || s == "occupation_measurement") return ModelKind::OccupationMeasurement;
  throw InvalidParameter("unknown model kind: " + s);
}

}  // namespace monfermi
