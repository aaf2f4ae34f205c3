#include "sgspec/finitetype.hpp"
