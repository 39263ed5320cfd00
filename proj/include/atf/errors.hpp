/**
 * @brief Exception hierarchy shared by every module.
 *
 * Three failure classes are distinguished because the command-line front end
 * maps them to different exit codes:
 *  - UsageError: the caller supplied an invalid argument (bad invariant,
 *    unsupported q, unrealizable datum).
 *  - PrecisionError: a truncated series could not answer a question at its
 *    current precision.  Never silently guessed.
 *  - InternalError: an internal consistency check failed (certificate,
 *    ledger disagreement, integrality assertion).
 */
#pragma once

#include <stdexcept>
#include <string>

namespace atf {

struct UsageError : std::invalid_argument {
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

struct PrecisionError : std::runtime_error {
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

struct InternalError : std::logic_error {
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

/** Throws InternalError with the given message unless the condition holds. */
inline void ensure(bool cond, const std::string& msg) {
    if (!cond) throw InternalError(msg);
}

}  // namespace atf
