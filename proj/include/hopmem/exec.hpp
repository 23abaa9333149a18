#pragma once

namespace hopmem {

// Execution policy for the data-parallel kernels. Every parallel path has a
// serial twin that produces bit-identical output; tests compare the two and
// the bench target times them.
enum class Exec {
    Serial,
    Parallel,
};

} // namespace hopmem
