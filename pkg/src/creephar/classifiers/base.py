class ClassifierError(ValueError):
    pass


class TrainingError(ClassifierError):
    pass


class InputError(ClassifierError):
    pass


class ConfigurationError(ClassifierError):
    pass
