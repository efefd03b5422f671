from __future__ import annotations


class SchemaVersion:
    """ major.minor of the snapshot format. Different major is not loadable """
    __major: int
    __minor: int
    __match_args__ = ('major', 'minor')

    def __init__(self, major: int, minor: int = 0):
        self.__major = major
        self.__minor = minor

    @classmethod
    def from_str(cls, value: str) -> SchemaVersion:
        match str(value).split(sep='.'):
            case (major, minor) if major.isdigit() and minor.isdigit():
                return cls(int(major), int(minor))
            case (major, ) if major.isdigit():
                return cls(int(major))
            case _:
                raise ValueError(F"got schema version {value!r}, expected <major>.<minor>")

    @property
    def major(self) -> int:
        return self.__major

    @property
    def minor(self) -> int:
        return self.__minor

    def is_compatible(self, reader: SchemaVersion) -> bool:
        """ reader can load self """
        return self.__major == reader.major and reader >= self

    def __eq__(self, other: SchemaVersion):
        return (self.__major, self.__minor) == (other.major, other.minor)

    def __ge__(self, other: SchemaVersion):
        return (self.__major, self.__minor) >= (other.major, other.minor)

    def __hash__(self):
        return hash((self.__major, self.__minor))

    def __str__(self):
        return F'{self.__major}.{self.__minor}'

    def __repr__(self):
        return F"{self.__class__.__name__}({self.__major}, {self.__minor})"


SNAPSHOT_SCHEMA = SchemaVersion(1, 0)
