#pragma once

#include "ssakit/error.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <functional>

namespace ssakit::testing {

/// Code of the ssakit::Error thrown by fn.
inline ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::kInvalidArgument;
}

}  // namespace ssakit::testing
