#ifndef PCQ_ERRORS_HPP
#define PCQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pcq {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NonPositiveRate : public Error { public: using Error::Error; };
class UnstableObserver : public Error { public: using Error::Error; };
class UnstableFinite : public Error { public: using Error::Error; };
class Unstable : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class LengthTooShort : public Error { public: using Error::Error; };
class NoConvergence : public Error { public: using Error::Error; };
class NonIncreasingProfile : public Error { public: using Error::Error; };
class SingularBoundary : public Error { public: using Error::Error; };
class BoundarySpeed : public Error { public: using Error::Error; };
class TruncationTooSmall : public Error { public: using Error::Error; };
class SingularSystem : public Error { public: using Error::Error; };
class QuadratureFailure : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };

} // namespace pcq

#endif
