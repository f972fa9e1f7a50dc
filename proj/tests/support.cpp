#include <fstream>
#include <sstream>
#include <stdexcept>

#include "test_support.hpp"

std::string qmc::test::read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
