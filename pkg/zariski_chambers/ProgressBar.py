from tqdm import tqdm


class ProgressBar:
    """Progress sink that ignores everything; the enumerator's default."""
    max_value: int
    message: str

    def __init__(self, max_value: int = 100, message: str = None):
        self.max_value = max_value
        self.message = message

    def reset(self, max_value: int = 100, message: str = None):
        self.max_value = max_value
        self.message = message
        return self

    def increment(self, incr: int = 1):
        return self

    def set_counts(self, **counts):
        return self

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        pass


class TerminalProgressBar(ProgressBar):
    """tqdm bar over top-level subtrees; stays silent when stderr is not a terminal."""
    pbar: tqdm

    def __init__(self, max_value: int = 100, message: str = None, unit: str = 'subtree'):
        super().__init__(max_value, message)
        self.unit = unit
        self.pbar = None

    def reset(self, max_value: int = 100, message: str = None):
        super().reset(max_value, message)
        if self.pbar is not None:
            self.pbar.reset(total=max_value)
            self.pbar.set_description(message)
        return self

    def increment(self, incr: int = 1):
        if self.pbar is not None:
            self.pbar.update(incr)
        return self

    def set_counts(self, **counts):
        if self.pbar is not None:
            self.pbar.set_postfix(counts, refresh=False)
        return self

    def __enter__(self):
        self.pbar = tqdm(total=self.max_value, desc=self.message, unit=self.unit,
                         disable=None, leave=False)
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        if self.pbar is not None:
            self.pbar.close()
            self.pbar = None
