#pragma once

#include <stdexcept>
#include <string>

namespace fineval {

/// Base of every error raised by the library. The CLI maps these to exit status 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define FINEVAL_DEFINE_ERROR(Name)                 \
    class Name : public Error {                    \
    public:                                        \
        explicit Name(const std::string& what)     \
            : Error(std::string(#Name ": ") + what) \
        {                                          \
        }                                          \
    }

// frame
FINEVAL_DEFINE_ERROR(IngestError);
FINEVAL_DEFINE_ERROR(SplitError);
FINEVAL_DEFINE_ERROR(WindowError);
// preprocess
FINEVAL_DEFINE_ERROR(TransformError);
// metrics
FINEVAL_DEFINE_ERROR(MetricError);
FINEVAL_DEFINE_ERROR(DegenerateDispersionError);
// options
FINEVAL_DEFINE_ERROR(PricingError);
FINEVAL_DEFINE_ERROR(NoImpliedVolError);
FINEVAL_DEFINE_ERROR(ConvergenceError);
// forecast
FINEVAL_DEFINE_ERROR(FormatError);
FINEVAL_DEFINE_ERROR(AlignError);
// strategy
FINEVAL_DEFINE_ERROR(SignalError);
FINEVAL_DEFINE_ERROR(StrategyError);
// stats
FINEVAL_DEFINE_ERROR(StatsError);

#undef FINEVAL_DEFINE_ERROR

/// Invalid configuration or command line. The CLI maps this to exit status 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fineval
