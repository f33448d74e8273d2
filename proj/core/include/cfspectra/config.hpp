#pragma once

#include <mpfr.h>

namespace cfspectra {

// Process-wide precision policy. Comparisons that cannot be settled at the
// working precision re-evaluate exact forms at doubled precision up to
// escalation_limit, then give up with IndistinguishableError.
struct Precision {
    static constexpr mpfr_prec_t kMinWorking = 64;
    static constexpr mpfr_prec_t kDefault = 256;
    static constexpr mpfr_prec_t kEscalationLimit = 16384;

    static mpfr_prec_t working();
    static void set_working(mpfr_prec_t bits);
};

} // namespace cfspectra
