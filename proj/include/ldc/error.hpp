// Copyright (c) LDC contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ldc {

/// Base for every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownVertex : public Error {
public:
    explicit UnknownVertex(const std::string& what) : Error("unknown vertex: " + what) {}
};

class EmptyGraph : public Error {
public:
    explicit EmptyGraph(const std::string& what = "empty graph") : Error(what) {}
};

/// A graph violated one of its construction invariants.
class InvalidGraph : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class MalformedLine : public Error {
public:
    MalformedLine(std::size_t line, const std::string& why)
        : Error("line " + std::to_string(line) + ": " + why), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class NonMonotoneTimestamp : public Error {
public:
    explicit NonMonotoneTimestamp(const std::string& subject)
        : Error("non-monotone onsets for subject " + subject), subject_(subject) {}
    const std::string& subject() const noexcept { return subject_; }

private:
    std::string subject_;
};

class EmptyRecord : public Error {
public:
    using Error::Error;
};

class NoRecords : public Error {
public:
    NoRecords() : Error("no records") {}
};

class NoEligibleOccurrence : public Error {
public:
    explicit NoEligibleOccurrence(const std::string& word)
        : Error("no eligible occurrence of '" + word + "'") {}
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class ZeroVariance : public Error {
public:
    ZeroVariance() : Error("zero variance") {}
};

class UndefinedActualCorrelation : public Error {
public:
    using Error::Error;
};

}  // namespace ldc
