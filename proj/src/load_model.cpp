#include "gridpeak/load_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gridpeak {

namespace {

void check_triple(double cz, double ci, double cp, const char* which) {
    const double sum = cz + ci + cp;
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument(std::string(which) +
                                    " ZIP coefficients sum to " + std::to_string(sum) +
                                    ", expected 1");
    }
    for (double c : {cz, ci, cp}) {
        if (!(c >= -2.0 && c <= 2.0)) {
            throw std::invalid_argument(std::string(which) +
                                        " ZIP coefficient out of [-2, 2]");
        }
    }
}

void check_voltage(double v_pu) {
    if (!(v_pu > 0.0)) {
        throw std::domain_error("load model evaluated at non-positive voltage");
    }
}

} // namespace

void ZipCoefficients::validate() const {
    check_triple(cz_p, ci_p, cp_p, "active");
    check_triple(cz_q, ci_q, cp_q, "reactive");
}

double zip_active(const ZipLoad& load, int hour, double v_pu) {
    check_voltage(v_pu);
    const double r = v_pu / load.ref_voltage_pu;
    const auto& z = load.zip;
    return load.baseline_p_kw.at(static_cast<std::size_t>(hour)) *
           (z.cz_p * r * r + z.ci_p * r + z.cp_p);
}

double zip_reactive(const ZipLoad& load, int hour, double v_pu) {
    check_voltage(v_pu);
    const double r = v_pu / load.ref_voltage_pu;
    const auto& z = load.zip;
    return load.baseline_q_kvar.at(static_cast<std::size_t>(hour)) *
           (z.cz_q * r * r + z.ci_q * r + z.cp_q);
}

std::pair<double, double>
effective_injection(const ZipLoad& load, int hour, double v_pu, double chi) {
    if (!(chi >= 0.0 && chi <= 1.0)) {
        throw std::domain_error("curtailment fraction outside [0, 1]");
    }
    const double keep = 1.0 - chi;
    return {keep * zip_active(load, hour, v_pu), keep * zip_reactive(load, hour, v_pu)};
}

} // namespace gridpeak
