#include "blas_guard.hpp"

#include <Eigen/Dense>
#include <cblas.h>

#include <cstdlib>
#include <mutex>
#include <random>

extern "C" {
void openblas_set_num_threads(int num_threads);
void gotoblas_dynamic_init(void);
void gotoblas_dynamic_quit(void);
}

namespace ssakit::detail {

namespace {

bool dgemm_matches_reference() {
    constexpr int n = 384;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = normal(rng);
    const Eigen::MatrixXd expected = a * a.transpose();
    Eigen::MatrixXd got(n, n);
    cblas_dgemm(CblasColMajor, CblasNoTrans, CblasTrans, n, n, n, 1.0, a.data(), n, a.data(), n, 0.0,
                got.data(), n);
    return (got - expected).norm() <= 1e-12 * expected.norm();
}

bool initialize() {
    openblas_set_num_threads(1);
    if (dgemm_matches_reference()) return true;
    for (const char* core : {"SkylakeX", "Haswell", "Sandybridge"}) {
        gotoblas_dynamic_quit();
        setenv("OPENBLAS_CORETYPE", core, 1);
        gotoblas_dynamic_init();
        openblas_set_num_threads(1);
        if (dgemm_matches_reference()) return true;
    }
    return false;
}

}  // namespace

bool blas_ready() {
    static std::once_flag once;
    static bool ok = false;
    std::call_once(once, [] { ok = initialize(); });
    return ok;
}

}  // namespace ssakit::detail
