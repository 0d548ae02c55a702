#pragma once

#include <string>

// Shared presentation texts for the worked example family. The printed
// relation lists are completed so that each compiled algebra has the
// dimension of the corresponding endomorphism-style construction.
namespace mirrorsmith::presentations {

inline std::string lambda_text(const std::string& field) {
  return "field " + field +
         "\n"
         "vertex v\n"
         "arrow x v v\n"
         "relations\n"
         "x^3\n"
         "end\n";
}

inline std::string a_text(const std::string& field) {
  return "field " + field +
         "\n"
         "vertex v1\n"
         "vertex v2\n"
         "arrow gamma v1 v1\n"
         "arrow beta v1 v2\n"
         "arrow alpha v2 v1\n"
         "relations\n"
         "alpha*beta\n"
         "alpha*gamma\n"
         "gamma^2 - beta*alpha\n"
         "gamma*beta\n"
         "end\n";
}

inline std::string b_text(const std::string& field) {
  return "field " + field +
         "\n"
         "vertex v1\n"
         "vertex v2\n"
         "arrow beta v1 v2\n"
         "arrow alpha v2 v1\n"
         "relations\n"
         "alpha*beta*alpha*beta\n"
         "end\n";
}

inline std::string ra_text(const std::string& field) {
  return "field " + field +
         "\n"
         "vertex v1\n"
         "vertex v2\n"
         "vertex w1\n"
         "arrow gamma v1 v1\n"
         "arrow beta v1 v2\n"
         "arrow alpha v2 v1\n"
         "arrow alphab v2 w1\n"
         "arrow betab w1 v2\n"
         "arrow gammab w1 w1\n"
         "relations\n"
         "beta*alphab\n"
         "betab*alpha\n"
         "alpha*gamma\n"
         "alphab*gammab\n"
         "gamma^2 - beta*alpha\n"
         "gammab^2 - betab*alphab\n"
         "alpha*beta + alphab*betab\n"
         "gamma*beta\n"
         "gammab*betab\n"
         "end\n";
}

inline std::string rb_text(const std::string& field) {
  return "field " + field +
         "\n"
         "vertex v1\n"
         "vertex v2\n"
         "vertex w1\n"
         "arrow beta v1 v2\n"
         "arrow alpha v2 v1\n"
         "arrow alphab v2 w1\n"
         "arrow betab w1 v2\n"
         "relations\n"
         "beta*alphab\n"
         "betab*alpha\n"
         "alpha*beta*alpha*beta + alphab*betab*alphab*betab\n"
         "alpha*beta*alphab\n"
         "alphab*betab*alpha\n"
         "end\n";
}

}  // namespace mirrorsmith::presentations
