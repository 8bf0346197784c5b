#pragma once

namespace thompson {

/// Selects the OpenMP kernel or the serial reference implementation. Both
/// produce identical results; the serial path exists for testing and
/// benchmarking.
enum class Execution { Serial, Parallel };

}  // namespace thompson
