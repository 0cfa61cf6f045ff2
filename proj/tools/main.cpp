#include <iostream>

#include "qrgitf/app.hpp"

int main(int argc, char** argv) { return qrgitf::app::run(argc, argv, std::cout, std::cerr); }
