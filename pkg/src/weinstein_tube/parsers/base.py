"""Abstract base parser for scene configurations."""

from abc import ABC, abstractmethod

from weinstein_tube.models import SceneConfig


class BaseSceneParser(ABC):
    """Abstract base class for scene configuration parsers."""

    @abstractmethod
    def parse(self, content: str) -> SceneConfig:
        """Parse configuration text into a validated SceneConfig.

        Args:
            content: Raw configuration document.

        Returns:
            SceneConfig with every default filled in.

        Raises:
            ConfigError: On syntax errors (with line/column) or schema violations
                (with the dotted key path).
        """
        pass
