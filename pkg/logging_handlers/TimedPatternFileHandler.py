import glob
import os
import re
import time
from logging.handlers import BaseRotatingHandler, TimedRotatingFileHandler

_INTERVALS = {
    'H': 60 * 60,
    'MIDNIGHT': 60 * 60 * 24,
}


class TimedPatternFileHandler(BaseRotatingHandler):
    """File handler whose file name is a strftime pattern of the current time.

    A new file is opened at the start of every interval (hourly or at local
    midnight). When ``backupCount`` is positive only that many older files
    matching the pattern are kept.
    """

    def __init__(self, filenamePattern: str, when: str = 'MIDNIGHT', backupCount: int = 0,
                 encoding: str = None, delay: bool = False):
        self.when = when.upper()
        if self.when not in _INTERVALS:
            raise ValueError(f'Invalid rollover interval specified: {when}')
        self.interval = _INTERVALS[self.when]
        self.backupCount = backupCount
        # computeRollover reads these
        self.utc = False
        self.atTime = None
        self.pattern = os.path.abspath(os.fspath(filenamePattern))
        self.rolloverAt = self._next_rollover(time.time())
        self._prune()
        super().__init__(self.pattern, 'a', encoding, delay)

    @property
    def baseFilename(self) -> str:
        # start of *this* interval
        t = self.rolloverAt - self.interval
        time_tuple = time.localtime(t)
        dst = time.localtime(self.rolloverAt)[-1]
        if dst != time_tuple[-1] and self.interval > 3600:
            # DST switches between t and self.rolloverAt
            time_tuple = time.localtime(t + (3600 if dst else -3600))
        return time.strftime(self.pattern, time_tuple)

    @baseFilename.setter
    def baseFilename(self, _):
        # FileHandler assigns it; the name always follows the pattern
        pass

    def _next_rollover(self, now: float) -> int:
        now = int(now)
        start = now
        if self.when == 'H':
            local = time.localtime(now)
            start -= local.tm_min * 60 + local.tm_sec
        rollover = self.computeRollover(start)
        while rollover <= now:
            rollover += self.interval
        if self.when == 'MIDNIGHT':
            dst = time.localtime(now)[-1]
            at_rollover = time.localtime(rollover)
            # a 23 or 25 hour day leaves the rollover one hour off midnight
            if dst != at_rollover[-1] and at_rollover.tm_hour != 0:
                rollover += 3600 if dst else -3600
        return rollover

    def matching_files(self):
        """Existing log files for this pattern, most recent first."""
        files = [path for path in glob.glob(re.sub(r'%.', '*', self.pattern)) if os.path.isfile(path)]
        return sorted(files, key=os.path.getmtime, reverse=True)

    def _prune(self) -> None:
        if self.backupCount <= 0:
            return
        current = self.baseFilename
        older = [path for path in self.matching_files() if path != current]
        for path in older[self.backupCount:]:
            os.remove(path)

    def shouldRollover(self, record) -> bool:
        return time.time() >= self.rolloverAt

    def doRollover(self) -> None:
        if self.stream:
            self.stream.close()
            self.stream = None
        self.rolloverAt = self._next_rollover(time.time())
        self._prune()
        if not self.delay:
            self.stream = self._open()

    # borrowed from TimedRotatingFileHandler
    computeRollover = TimedRotatingFileHandler.computeRollover
