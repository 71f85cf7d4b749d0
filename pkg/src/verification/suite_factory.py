from src.utils.errors import InputError
from src.verification.suites import (BesovSuite, CommutatorSuite, DilationSuite, DoiDualSuite,
                                     FirstDerivativeSuite, HSDifferentiabilitySuite,
                                     HSLipschitzSuite, IncrementSuite, NthDerivativeSuite,
                                     SecondDerivativeSuite, SemispectralSuite, VonNeumannSuite)


class SuiteFactory:
    """
    Factory class to create verification suites by their command-line name.
    """
    SUITES = {
        suite.name: suite
        for suite in (DilationSuite, SemispectralSuite, IncrementSuite, CommutatorSuite,
                      FirstDerivativeSuite, SecondDerivativeSuite, NthDerivativeSuite,
                      HSLipschitzSuite, HSDifferentiabilitySuite, BesovSuite, DoiDualSuite,
                      VonNeumannSuite)
    }

    @staticmethod
    def available_suites():
        return list(SuiteFactory.SUITES)

    @staticmethod
    def create_suite(suite_name, config):
        """
        Create the suite registered under suite_name.

        InputError (a ValueError): if no suite has that name
        """
        try:
            suite_class = SuiteFactory.SUITES[suite_name]
        except KeyError:
            raise InputError(f"Invalid suite name: {suite_name}")
        return suite_class(config)
