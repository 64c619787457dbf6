#pragma once

namespace lsl {

/// Selects between the OpenMP kernels and their serial reference versions.
enum class Exec { serial, parallel };

/// Thread count for parallel kernels: LEVELSET_LAB_THREADS if set and
/// positive, otherwise the OpenMP default.
int thread_count();

}  // namespace lsl
