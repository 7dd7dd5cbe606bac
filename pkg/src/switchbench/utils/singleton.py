from threading import Lock


class SingletonMeta(type):
    """
    Thread-safe singleton metaclass: the first call creates the instance,
    later calls return it and ignore their arguments.
    """

    _instances = {}
    _lock: Lock = Lock()

    def __call__(cls, *args, **kwargs):
        # two threads may race past the first lookup; the lock makes sure only
        # one of them constructs the instance
        with cls._lock:
            if cls not in cls._instances:
                cls._instances[cls] = super().__call__(*args, **kwargs)
        return cls._instances[cls]
