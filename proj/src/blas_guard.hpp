#pragma once

namespace ssakit::detail {

/// Pins OpenBLAS to one thread and verifies its dgemm once per process. Some
/// OpenBLAS builds pick a faulty kernel on newer CPUs; the guard then reloads a
/// known-good kernel set. Returns false if LAPACK must not be used.
bool blas_ready();

}  // namespace ssakit::detail
