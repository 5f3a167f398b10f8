#pragma once

#include <stdexcept>
#include <string>

namespace ndi {

// Base of all library errors. Subcategories map onto CLI exit codes:
// ConfigError -> 2, DataError -> 3, NumericError -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

// --- ingest ---
class MalformedDamage : public DataError {
public:
    using DataError::DataError;
};
class MissingCpiYear : public DataError {
public:
    using DataError::DataError;
};
class EmptyWindow : public DataError {
public:
    using DataError::DataError;
};
class NoRecords : public DataError {
public:
    using DataError::DataError;
};

// --- index / series ---
class TooFewPeriods : public DataError {
public:
    using DataError::DataError;
};
class TooFewPoints : public DataError {
public:
    using DataError::DataError;
};

// --- dist / special functions ---
class DomainError : public NumericError {
public:
    using NumericError::NumericError;
};
class InvalidParams : public NumericError {
public:
    using NumericError::NumericError;
};
class OutsideDomain : public NumericError {
public:
    using NumericError::NumericError;
};

// --- pricing ---
class NoRoot : public NumericError {
public:
    using NumericError::NumericError;
};
class DomainTooNarrow : public NumericError {
public:
    using NumericError::NumericError;
};
class EmptyPaths : public DataError {
public:
    using DataError::DataError;
};

// --- riskbudget ---
class ZeroPortfolioVariance : public NumericError {
public:
    using NumericError::NumericError;
};
class TooFewTailScenarios : public DataError {
public:
    using DataError::DataError;
};
class ZeroTotalRisk : public NumericError {
public:
    using NumericError::NumericError;
};
class OverlappingGroups : public DataError {
public:
    using DataError::DataError;
};
class UncoveredTypes : public DataError {
public:
    using DataError::DataError;
};
class PanelTooShort : public DataError {
public:
    using DataError::DataError;
};

// --- stress ---
class TooFewConditionalScenarios : public DataError {
public:
    using DataError::DataError;
};
class EmptyJointTail : public DataError {
public:
    using DataError::DataError;
};
class DegenerateDispersion : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace ndi
