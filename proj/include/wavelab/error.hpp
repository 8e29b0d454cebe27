#pragma once

#include <stdexcept>
#include <string>

namespace wavelab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigurationError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ResolutionError : public Error {
public:
    using Error::Error;
};

class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}
    double achieved() const { return achieved_; }

private:
    double achieved_;
};

class GridMismatchError : public Error {
public:
    using Error::Error;
};

class ConstructionError : public Error {
public:
    using Error::Error;
};

class ScheduleError : public Error {
public:
    using Error::Error;
};

class InadmissibleBumpError : public Error {
public:
    InadmissibleBumpError(const std::string& what, int i, int j, int k)
        : Error(what), i_(i), j_(j), k_(k) {}
    int i() const { return i_; }
    int j() const { return j_; }
    int k() const { return k_; }

private:
    int i_, j_, k_;
};

}  // namespace wavelab
