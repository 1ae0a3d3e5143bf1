#pragma once

#include <span>
#include <string_view>

#include "bellsim/hv_space.hpp"
#include "bellsim/runner.hpp"

namespace bellsim {

enum class SymptomVerdict {
    HiddenVariableSymptom,  // T_obs varies significantly, minimum at the right angle
    ConstantTobs,           // constancy not rejected
    VariesElsewhere,        // T_obs varies significantly, minimum somewhere else
};

std::string_view to_string(SymptomVerdict verdict) noexcept;

/**
 * T_obs-vs-phi analysis of a sweep.
 *
 * Constancy of the coincidence fraction T_obs/T across grid points is tested
 * with a chi-square homogeneity test (k - 1 degrees of freedom). The symptom
 * of value-dependent missing records is a significant variation whose minimum
 * lies within one grid step of pi/2 (sphere) or pi/4 (circle).
 */
struct SymptomReport {
    std::size_t points = 0;
    double grid_step = 0.0;
    double min_phi = 0.0;
    double min_fraction = 0.0;  // T_obs / T at min_phi
    double max_fraction = 0.0;
    double expected_min_phi = 0.0;
    double chi_square = 0.0;
    int degrees_of_freedom = 0;
    double p_value = 1.0;
    double significance = 0.01;
    bool constancy_rejected = false;
    bool minimum_at_expected = false;
    SymptomVerdict verdict = SymptomVerdict::ConstantTobs;
};

/// Requires at least 5 records whose phi values span [0, pi/2]; throws
/// std::invalid_argument otherwise.
SymptomReport analyze_symptoms(std::span<const SweepRecord> records, HvSpace space, double significance = 0.01);

}  // namespace bellsim
