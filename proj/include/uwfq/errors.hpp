#pragma once

#include <stdexcept>
#include <string>

namespace uwfq {

// Root of every error the simulator raises on purpose.
class Error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
	using Error::Error;
};

class NonMonotonicClock : public Error {
public:
	using Error::Error;
};

class EmptyUser : public Error {
public:
	using Error::Error;
};

class UnknownUser : public Error {
public:
	using Error::Error;
};

class MissingDeadline : public Error {
public:
	using Error::Error;
};

class UnknownPolicy : public Error {
public:
	using Error::Error;
};

class ParseError : public Error {
public:
	ParseError(const std::string& what, std::size_t line)
	: Error("line " + std::to_string(line) + ": " + what), line_(line)
	{
	}

	std::size_t line() const { return line_; }

private:
	std::size_t line_;
};

class EmptyWindow : public Error {
public:
	using Error::Error;
};

class IncompleteJob : public Error {
public:
	using Error::Error;
};

class Deadlock : public Error {
public:
	using Error::Error;
};

class BoundViolation : public Error {
public:
	using Error::Error;
};

} // namespace uwfq
