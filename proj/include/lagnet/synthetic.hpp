#pragma once

#include "lagnet/panel.hpp"

#include <cstdint>

namespace lagnet {

/// Two-block factor model for desk-scale validation. Western series load on
/// a common factor F_t the same day; Eastern series load on F_{t-1} (their
/// sessions close before the factor's market opens) and optionally on F_t
/// with a separate same-day loading.
struct SyntheticSpec {
    int n_west = 10;
    int n_east = 10;
    double common_loading = 0.6;       // West on F_t
    double leadlag_loading = 0.6;      // East on F_{t-1}
    double east_sameday_loading = 0.0; // East on F_t
    double noise_scale = 0.5;
    int days = 1250;
    std::uint64_t seed = 1;
};

/// Prices exponentiated from the model returns, starting at 100 on
/// consecutive weekdays from 2003-01-02. The panel has days+1 rows so its
/// log-returns reproduce exactly `days` model rows. Deterministic per seed.
PricePanel generate_synthetic(const SyntheticSpec& spec);

} // namespace lagnet
