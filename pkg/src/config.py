"""Pipeline configuration: defaults, .env, JSON config file and CLI flags."""

import json
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from dotenv import load_dotenv

from .analysis.metrics import ISAID_CLASSES
from .errors import ConfigError, DmpToolkitError, ParameterError
from .models.feature_stack import ValueDomain
from .models.specs import DifferentialSpec, DmpPreset, preset
from .models.structuring_element import SEShape
from .tiling.tiler import DEFAULT_STEP, DEFAULT_WINDOW

ENV_THREADS = 'DMP_THREADS'
ENV_CONFIG = 'DMP_CONFIG'


@dataclass
class PipelineConfig:
    """Every knob shared by the CLI commands."""
    preset: Optional[str] = DmpPreset.IMPROVED.key
    pairs: Optional[Union[str, List[List[int]]]] = None
    shape: str = SEShape.SQUARE.value
    value_domain: str = ValueDomain.UNIT_FLOAT.key
    window: int = DEFAULT_WINDOW
    step: int = DEFAULT_STEP
    dmp_before_tiling: bool = False
    num_classes: int = len(ISAID_CLASSES)
    exclude_background: bool = False
    background_class: int = 0
    threads: int = 1
    hybrid: bool = False

    def violations(self) -> List[str]:
        """Every problem with this config, not just the first."""
        problems = []
        try:
            SEShape.from_name(self.shape)
        except DmpToolkitError as e:
            problems.append(str(e))
        else:
            # pairs are parsed together with the shape
            try:
                self.differential_spec()
            except DmpToolkitError as e:
                problems.append(str(e))
        try:
            ValueDomain.from_name(self.value_domain)
        except DmpToolkitError as e:
            problems.append(str(e))

        numeric = {}
        for name in ('window', 'step', 'num_classes', 'threads', 'background_class'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                problems.append(f"{name} must be an integer, got {value!r}")
            else:
                numeric[name] = value

        window, step = numeric.get('window'), numeric.get('step')
        if window is not None and window < 1:
            problems.append(f"window must be positive, got {window}")
        if step is not None:
            if step < 1:
                problems.append(f"step must be positive, got {step}")
            elif window is not None and step > window >= 1:
                problems.append(f"step {step} exceeds window {window}")
        num_classes = numeric.get('num_classes')
        if num_classes is not None and num_classes < 1:
            problems.append(f"num_classes must be positive, got {num_classes}")
        elif num_classes is not None and 'background_class' in numeric:
            if not 0 <= numeric['background_class'] < num_classes:
                problems.append(
                    f"background_class {numeric['background_class']} outside [0, {num_classes})"
                )
        threads = numeric.get('threads')
        if threads is not None and threads < 1:
            problems.append(f"threads must be at least 1, got {threads}")
        return problems

    def validate(self) -> 'PipelineConfig':
        problems = self.violations()
        if problems:
            raise ConfigError(problems)
        return self

    def differential_spec(self) -> DifferentialSpec:
        """Explicit pairs win over the preset."""
        if self.pairs:
            if isinstance(self.pairs, str):
                return DifferentialSpec.parse(self.shape, self.pairs)
            if not isinstance(self.pairs, (list, tuple)):
                raise ParameterError(
                    "pairs must be a list of [outer, inner] pairs or an 'A-B,...' string"
                )
            return DifferentialSpec(SEShape.from_name(self.shape), tuple(self.pairs))
        return preset(self.preset or DmpPreset.IMPROVED.key, self.shape)

    @property
    def domain(self) -> ValueDomain:
        return ValueDomain.from_name(self.value_domain)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: Mapping[str, Any]) -> 'PipelineConfig':
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError([f"Unknown config key '{key}'" for key in unknown])
        return cls(**dict(values))

    @classmethod
    def load(cls, config_path: Optional[Union[str, Path]] = None,
             overrides: Optional[Mapping[str, Any]] = None,
             env: Optional[Mapping[str, str]] = None) -> 'PipelineConfig':
        """
        Build the effective config.

        Args:
            config_path: JSON config file (falls back to $DMP_CONFIG)
            overrides: values from command-line flags; None entries are ignored
            env: environment mapping (defaults to os.environ after loading .env)

        Returns:
            Validated PipelineConfig
        """
        if env is None:
            load_dotenv()
            env = os.environ

        values: Dict[str, Any] = {}
        problems: List[str] = []
        if env.get(ENV_THREADS):
            try:
                values['threads'] = int(env[ENV_THREADS])
            except ValueError:
                problems.append(f"{ENV_THREADS} must be an integer, got {env[ENV_THREADS]!r}")

        config_path = config_path or env.get(ENV_CONFIG)
        if config_path:
            path = Path(config_path)
            try:
                loaded = json.loads(path.read_text(encoding='utf-8'))
            except FileNotFoundError:
                raise ConfigError([f"Config file not found: {path}"]) from None
            except json.JSONDecodeError as e:
                raise ConfigError([f"Config file {path} is not valid JSON: {e}"]) from None
            if not isinstance(loaded, dict):
                raise ConfigError([f"Config file {path} must hold a JSON object"])
            values.update(loaded)

        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        # explicit pairs on the command line replace a preset from the file, and vice versa
        if overrides and overrides.get('preset') is not None and overrides.get('pairs') is None:
            values['pairs'] = None

        try:
            config = cls.from_dict(values)
        except ConfigError as e:
            raise ConfigError(problems + e.violations) from None
        problems.extend(config.violations())
        if problems:
            raise ConfigError(problems)
        return config
