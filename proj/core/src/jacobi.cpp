#include "sgspec/jacobi.hpp"
