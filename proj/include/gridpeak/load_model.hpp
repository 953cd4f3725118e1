#pragma once

#include <array>
#include <utility>

namespace gridpeak {

/// Polynomial load coefficients. The active and reactive triples each sum to
/// one; validate() rejects anything else, no silent renormalisation.
struct ZipCoefficients {
    double cz_p = 0.0, ci_p = 0.0, cp_p = 1.0;
    double cz_q = 0.0, ci_q = 0.0, cp_q = 1.0;

    /// Throws std::invalid_argument when a triple does not sum to 1 within
    /// 1e-9 or a coefficient falls outside [-2, 2].
    void validate() const;
};

/// One aggregated customer group at a bus, with a 24 h baseline profile.
struct ZipLoad {
    int bus = 0;
    std::array<double, 24> baseline_p_kw{};
    std::array<double, 24> baseline_q_kvar{};
    double ref_voltage_pu = 1.0;   // voltage at which the baseline was metered
    ZipCoefficients zip{};
    bool curtailable = false;
    double penalty_usd_per_kw = 0.0;
};

/// Voltage-corrected active demand in kW at hour `hour` and voltage `v_pu`.
[[nodiscard]] double zip_active(const ZipLoad& load, int hour, double v_pu);

/// Voltage-corrected reactive demand in kvar, same polynomial against the
/// reactive baseline.
[[nodiscard]] double zip_reactive(const ZipLoad& load, int hour, double v_pu);

/// (P, Q) actually drawn after curtailing a fraction chi in [0, 1].
[[nodiscard]] std::pair<double, double>
effective_injection(const ZipLoad& load, int hour, double v_pu, double chi);

} // namespace gridpeak
