#ifndef WAVEHOLTZ_VERIFY_HPP
#define WAVEHOLTZ_VERIFY_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "waveholtz/filter.hpp"

namespace wh
{
    enum class VerifyLevel
    {
        Quick, // one dimensional and small surrogate checks
        Full   // adds the DG fixed point and the 2D finite difference run at omega = 10 pi
    };

    struct CheckResult
    {
        std::string name;
        bool passed = false;
        std::string detail;
    };

    using TransferFunction = std::function<complex(complex)>;

    struct VerifyOptions
    {
        VerifyLevel level = VerifyLevel::Quick;
        std::uint64_t seed = 20240601;
        TransferFunction transfer = [](complex z) { return beta_hat(z); }; // the filter checks compare against this
    };

    std::vector<CheckResult> run_verify(const VerifyOptions& options);

    /// filtered propagation of dw/dt = lambda w versus transfer(lambda / omega).
    CheckResult check_filter_consistency(const TransferFunction& transfer);
} // namespace wh

#endif
