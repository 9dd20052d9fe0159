#include <string>
#include <vector>

#include <rangeshape/cli.hpp>

int main(int argc, char** argv) {
  return rangeshape::cli::execute(std::vector<std::string>(argv, argv + argc));
}
