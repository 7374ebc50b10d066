// Copyright 2026 The bbwe Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <stdexcept>
#include <string>

namespace bbwe {

// Every error carries the name of the contract it violates so front ends can
// print greppable "error: <contract>" lines.
class Error : public std::runtime_error {
public:
    Error(std::string contract, const std::string& message)
        : std::runtime_error(message), contract_(std::move(contract)) {}

    const std::string& contract() const noexcept { return contract_; }

private:
    std::string contract_;
};

// Wrong sizes, rates, or shapes handed to an operation.
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& message) : Error("invalid-input", message) {}
};

// Malformed bytes: weight files, RIFF containers.
class FormatError : public Error {
public:
    explicit FormatError(const std::string& message) : Error("format", message) {}
};

// Well-formed data that does not satisfy the model graph or budget.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message) : Error("validation", message) {}
};

// Operation invoked on an object that is not ready for it.
class StateError : public Error {
public:
    explicit StateError(const std::string& message) : Error("state", message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("io", message) {}
};

} // namespace bbwe
