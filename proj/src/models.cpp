#include "irrev/models.hpp"

#include <cmath>
#include <sstream>

#include "irrev/error.hpp"
#include "irrev/io.hpp"
#include "irrev/random.hpp"

namespace irrev {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::logistic: return "logistic";
    case ModelKind::henon: return "henon";
    case ModelKind::gaussian: return "gaussian";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view text) {
  if (text == "logistic") return ModelKind::logistic;
  if (text == "henon") return ModelKind::henon;
  if (text == "gaussian") return ModelKind::gaussian;
  throw Error(ErrorCode::InvalidParams, "unknown model '" + std::string(text) + "'");
}

void ModelSpec::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (n < 1) throw Error(ErrorCode::InvalidParams, "series length n must be >= 1");
  switch (kind) {
    case ModelKind::logistic:
      if (!finite(logistic.r) || !finite(logistic.x1) || logistic.r <= 0.0 || logistic.r > 4.0)
        throw Error(ErrorCode::InvalidParams, "logistic map needs finite x1 and r in (0, 4]");
      break;
    case ModelKind::henon:
      if (!finite(henon.alpha) || !finite(henon.beta) || !finite(henon.x1) || !finite(henon.y1))
        throw Error(ErrorCode::InvalidParams, "Henon parameters must be finite");
      break;
    case ModelKind::gaussian:
      if (!gaussian.seed)
        throw Error(ErrorCode::InvalidParams, "gaussian series requires an explicit seed");
      if (!finite(gaussian.mean) || !finite(gaussian.sd) || gaussian.sd <= 0.0)
        throw Error(ErrorCode::InvalidParams, "gaussian needs finite mean and sd > 0");
      break;
  }
}

std::string ModelSpec::describe() const {
  std::ostringstream out;
  out << to_string(kind) << " n=" << n << " burn_in=" << burn_in;
  switch (kind) {
    case ModelKind::logistic:
      out << " r=" << format_double(logistic.r) << " x1=" << format_double(logistic.x1);
      break;
    case ModelKind::henon:
      out << " alpha=" << format_double(henon.alpha) << " beta=" << format_double(henon.beta)
          << " x1=" << format_double(henon.x1) << " y1=" << format_double(henon.y1);
      break;
    case ModelKind::gaussian:
      out << " mean=" << format_double(gaussian.mean) << " sd=" << format_double(gaussian.sd)
          << " seed=" << (gaussian.seed ? std::to_string(*gaussian.seed) : "none");
      break;
  }
  return out.str();
}

std::vector<double> generate(const ModelSpec& spec) {
  spec.validate();
  const std::size_t total = spec.n + spec.burn_in;
  std::vector<double> out;
  out.reserve(spec.n);
  auto emit = [&](std::size_t t, double v) {
    if (t >= spec.burn_in) out.push_back(v);
  };

  switch (spec.kind) {
    case ModelKind::logistic: {
      // For r <= 4 an iterate outside [0, 1] sends the orbit to -infinity.
      const double r = spec.logistic.r;
      double x = spec.logistic.x1;
      for (std::size_t t = 0; t < total; ++t) {
        if (!(x >= 0.0 && x <= 1.0))
          throw Error(ErrorCode::DivergedOrbit,
                      "logistic iterate " + std::to_string(t + 1) + " = " + format_double(x) +
                          " left [0, 1]");
        emit(t, x);
        x = r * x * (1.0 - x);
      }
      break;
    }
    case ModelKind::henon: {
      const double alpha = spec.henon.alpha;
      const double beta = spec.henon.beta;
      double x = spec.henon.x1;
      double y = spec.henon.y1;
      for (std::size_t t = 0; t < total; ++t) {
        if (!std::isfinite(x) || !std::isfinite(y))
          throw Error(ErrorCode::DivergedOrbit,
                      "Henon orbit escaped at iterate " + std::to_string(t + 1));
        emit(t, x);
        const double next_x = 1.0 - alpha * x * x + y;
        y = beta * x;
        x = next_x;
      }
      break;
    }
    case ModelKind::gaussian: {
      NormalSource source(*spec.gaussian.seed);
      for (std::size_t t = 0; t < total; ++t)
        emit(t, spec.gaussian.mean + spec.gaussian.sd * source.next());
      break;
    }
  }
  return out;
}

}  // namespace irrev
