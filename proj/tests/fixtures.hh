#ifndef FLOYD_TESTS_FIXTURES_HH
#define FLOYD_TESTS_FIXTURES_HH

#include <string>

#include "floyd/io.hh"

namespace fixture {

inline std::string path(const std::string& name) { return std::string(FLOYD_TEST_DATA) + "/" + name; }

inline floyd::AlphabetPtr fig1() { return floyd::load_opm(path("fig1.opm")); }
inline floyd::FloydAutomaton example1() { return floyd::load_fa(path("example1.fa")); }
inline floyd::Formula example3() { return floyd::load_formula(path("example3.mso")); }
inline floyd::Formula example4() { return floyd::load_formula(path("example4.mso")); }

inline const char* const kFig1Word = "hnd call_a rst hnd call_a ret_a call_b rst";

} // namespace fixture

#endif
