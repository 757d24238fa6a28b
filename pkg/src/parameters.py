"""
Typed, documented parameter records backed by YAML config files.

Each configurable class of the package (ParsNumerics, ParsVerifier, ParsRun)
subclasses Parameters, declares its values with add_par() and finishes
its constructor with load_then_update(kwargs).
"""
import os
import copy

import yaml

# YAML files already read, keyed by their full path,
# so that several records can share one file
# (each under its own key) without re-reading it.
LOADED_FILES = {}

# relative config names are looked up here
CONFIG_FOLDER = os.path.abspath(os.path.join(os.path.dirname(__file__), "../configs"))

# values handed down from an owner record to the records it creates
# (e.g., from a ParsVerifier to the ParsNumerics of the same Verifier)
propagated_keys = ["cfg_file", "verbose"]


class Parameters:
    """
    Base class for parameter records.

    Parameters are declared in the constructor of a subclass
    with add_par(name, default, types, docstring), and are
    then read and written as attributes (or as items, pars["name"]).
    Assigning a value of the wrong type raises a TypeError.
    After the constructor sets _enforce_no_new_attrs = True,
    assigning an undeclared name (a typo in a config file
    or in the kwargs) raises an AttributeError.

    Subclasses end their constructor with load_then_update(kwargs):
    values are first read from a YAML file under the key given by
    _get_default_cfg_key() (e.g., "numerics" or "verifier"),
    and then overridden by the keyword arguments.

    The config file is chosen with the cfg_file parameter:
    - a name or a path (relative paths are searched in configs/,
      and ".yaml" is appended if missing). The file must exist.
    - None or False: nothing is loaded.
    The command line always uses cfg_file=False.
    """

    def __init__(self):
        self.__typecheck__ = {}
        self.__defaultpars__ = {}
        self.__docstrings__ = {}

        self.cfg_file = self.add_par(
            "cfg_file",
            None,
            (None, str, bool),
            "Name or path of the YAML config file. "
            "If None or False, no file will be loaded.",
        )

        self.verbose = self.add_par(
            "verbose",
            0,
            int,
            "Level of verbosity: 0 is quiet, 1 reports each sample, "
            "2 also reports each probe.",
        )

        self._enforce_type_checks = self.add_par(
            "_enforce_type_checks",
            True,
            bool,
            "Check assigned values against the types given to add_par().",
        )

        self._enforce_no_new_attrs = self.add_par(
            "_enforce_no_new_attrs",
            False,
            bool,
            "Reject attributes that were not declared with add_par().",
        )

        self._cfg_key = self.add_par(
            "_cfg_key",
            None,
            (None, str),
            "The key under which the values were read from the config file.",
        )

    def __contains__(self, key):
        return hasattr(self, key)

    def __getitem__(self, key):
        return getattr(self, key)

    def __setitem__(self, key, value):
        setattr(self, key, value)

    def __setattr__(self, key, value):
        locked = getattr(self, "_enforce_no_new_attrs", False)
        if locked and key not in self.__dict__ and key not in propagated_keys:
            raise AttributeError(f'Attribute "{key}" does not exist.')

        typed = getattr(self, "_enforce_type_checks", False)
        if typed and key in self.__typecheck__:
            if not isinstance(value, self.__typecheck__[key]):
                raise TypeError(
                    f'Parameter "{key}" must be of type {self.__typecheck__[key]}'
                )

        super().__setattr__(key, value)

    def add_par(self, name, default, par_types, docstring):
        """
        Declare a parameter, and return its default so the
        declaration fits on one line:

        self.samples = self.add_par("samples", 20, int, "Number of samples.")

        par_types is a type or a tuple of types (None allows None values).
        A float parameter also accepts integers.
        """
        if name in self.__typecheck__:
            raise ValueError(f"Parameter {name} already exists.")
        if not isinstance(par_types, tuple):
            par_types = (par_types,)
        par_types = tuple(type(None) if pt is None else pt for pt in par_types)
        if float in par_types and int not in par_types:
            par_types += (int,)
        self.__typecheck__[name] = par_types
        self.__docstrings__[name] = docstring
        self.__defaultpars__[name] = default
        self[name] = default
        return default

    def load_then_update(self, inputs):
        """
        Load the config file named by inputs["cfg_file"] (if any),
        then apply the inputs on top of the values from the file.

        Returns
        -------
        dict
            The combined values that were assigned.
        """
        filename = inputs.get("cfg_file", None)
        cfg_key = self._get_default_cfg_key()

        config = dict(self.load(filename, cfg_key))
        self._cfg_key = cfg_key
        config.update(inputs)

        for k, v in config.items():
            setattr(self, k, v)

        return config

    def load(self, filename, key=None):
        """
        Read a dictionary of values from a YAML file.

        Parameters
        ----------
        filename: str, bool or None
            Name or path of the file. Relative paths are
            searched in the configs folder. None, False
            and True do not load anything.
        key: str, optional
            Return only the values under this key of the file.

        Returns
        -------
        dict
        """
        if filename is None or isinstance(filename, bool):
            return {}

        if os.path.isabs(filename):
            filepath = filename
        else:
            filepath = os.path.join(CONFIG_FOLDER, filename)

        if not filepath.lower().endswith((".yml", ".yaml")):
            filepath += ".yaml"

        config = self._get_file_from_disk(filepath) or {}
        if key is not None:
            config = config.get(key, {}) or {}

        return config

    def read(self, dictionary):
        """Assign all values in a dictionary."""
        for k, v in dictionary.items():
            self[k] = v

    def save(self, filename):
        """
        Save the public parameters to a YAML file,
        as a record of the values used in a run.
        """
        outputs = {k: v for k, v in self.__dict__.items() if not k.startswith("_")}
        with open(filename, "w") as file:
            yaml.dump(outputs, file, default_flow_style=False)

    def copy(self):
        return copy.deepcopy(self)

    def add_defaults_to_dict(self, inputs):
        """
        Add the propagated keys (cfg_file, verbose) of this
        record to the inputs of a child record, unless given there.
        """
        for k in propagated_keys:
            if k in self and k not in inputs:
                inputs[k] = self[k]

    def print(self, owner_pars=None):
        """
        Print the parameters with their descriptions.
        Propagated parameters with the same value as in
        owner_pars are only listed by name.
        """
        if owner_pars is not None and not isinstance(owner_pars, Parameters):
            raise ValueError("owner_pars must be a Parameters object.")

        names = []
        propagated = []
        for name in self.__dict__:
            if name.startswith("_"):
                continue
            if (
                owner_pars is not None
                and name in propagated_keys
                and self[name] == owner_pars[name]
            ):
                propagated.append(name)
                continue
            names.append(name)

        if propagated:
            print(f" Propagated pars: {', '.join(propagated)}")
        if names:
            width = max(len(n) for n in names)
            for n in names:
                print(f" {n:>{width}}{self._get_par_string(n)}")

    def compare(self, other, hidden=False, ignore=None, verbose=False):
        """
        True if all declared parameters have the same values
        in both records. Hidden parameters ("_" prefix) are
        skipped unless hidden=True, and so are names in ignore.
        With verbose=True, every difference is printed.
        """
        ignore = ignore or []

        same = True
        for k in self.__defaultpars__:
            if k in ignore or (not hidden and k.startswith("_")):
                continue
            if self[k] != other[k]:
                same = False
                if not verbose:
                    break
                print(f'Par "{k}" is different: {self[k]} vs {other[k]}')

        return same

    def _get_par_string(self, name):
        value = self[name]
        if isinstance(value, str):
            value = f'"{value}"'

        desc = self.__docstrings__.get(name, "").strip().rstrip(".")
        extra = []
        if name in self.__defaultpars__:
            extra.append(f"default= {self.__defaultpars__[name]}")
        if name in self.__typecheck__:
            extra.append(f'types= {", ".join(t.__name__ for t in self.__typecheck__[name])}')
        extra = f" [{', '.join(extra)}]" if extra else ""

        return f"= {value} % {desc}{extra}"

    @staticmethod
    def _get_file_from_disk(filename):
        if filename not in LOADED_FILES:
            with open(filename) as file:
                LOADED_FILES[filename] = yaml.safe_load(file)

        return LOADED_FILES[filename]

    @classmethod
    def _get_default_cfg_key(cls):
        """
        The key of this record in a config file (None reads the whole file).
        """
        return None
